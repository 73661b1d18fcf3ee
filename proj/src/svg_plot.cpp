#include "hexsim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hexsim {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 600;
constexpr int kMargin = 60;

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad(double fraction) {
        const double span = hi - lo;
        const double p = span > 0.0 ? span * fraction : 0.5;
        lo -= p;
        hi += p;
    }
    double map(double v, double out_lo, double out_hi) const {
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

std::string polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                     const Range& rx, const Range& ry, const std::string& style) {
    // Decimate long traces; the plots are diagnostic.
    const size_t n = xs.size();
    const size_t stride = std::max<size_t>(1, n / 2000);
    std::ostringstream out;
    out << "<polyline fill=\"none\" " << style << " points=\"";
    for (size_t i = 0; i < n; i += stride) {
        out << rx.map(xs[i], kMargin, kWidth - kMargin) << ','
            << ry.map(ys[i], kHeight - kMargin, kMargin) << ' ';
    }
    if ((n - 1) % stride != 0) {
        out << rx.map(xs[n - 1], kMargin, kWidth - kMargin) << ','
            << ry.map(ys[n - 1], kHeight - kMargin, kMargin);
    }
    out << "\"/>\n";
    return out.str();
}

std::string axes(const Range& rx, const Range& ry, const std::string& xlabel,
                 const std::string& ylabel) {
    std::ostringstream out;
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
        << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
        << "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        const double px = rx.map(fx, kMargin, kWidth - kMargin);
        const double py = ry.map(fy, kHeight - kMargin, kMargin);
        out << "<text x=\"" << px << "\" y=\"" << kHeight - kMargin + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fx << "</text>\n";
        out << "<text x=\"" << kMargin - 8 << "\" y=\"" << py + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << fy << "</text>\n";
    }
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
        << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    out << "<text x=\"18\" y=\"" << kHeight / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kHeight / 2 << ")\">" << ylabel << "</text>\n";
    return out.str();
}

std::vector<double> column(const SimLog& log, const std::string& name) {
    const int idx = log.column_index(name);
    if (idx < 0) {
        throw std::runtime_error("log is missing column " + name);
    }
    std::vector<double> v;
    v.reserve(log.rows.size());
    for (const auto& row : log.rows) {
        v.push_back(row[static_cast<size_t>(idx)]);
    }
    return v;
}

void write_svg(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body << "</svg>\n";
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

}  // namespace

void write_trajectory_svg(const SimLog& log, const std::string& path) {
    if (log.empty()) {
        throw std::runtime_error("empty log");
    }
    const auto px = column(log, "px");
    const auto py = column(log, "py");
    const auto sx = column(log, "sp_px");
    const auto sy = column(log, "sp_py");

    Range rx{px[0], px[0]}, ry{py[0], py[0]};
    for (size_t i = 0; i < px.size(); ++i) {
        rx.include(px[i]);
        rx.include(sx[i]);
        ry.include(py[i]);
        ry.include(sy[i]);
    }
    // Equal scale for a top view.
    const double span = std::max(rx.hi - rx.lo, ry.hi - ry.lo);
    const double cx = (rx.hi + rx.lo) / 2.0;
    const double cy = (ry.hi + ry.lo) / 2.0;
    rx = {cx - span / 2.0, cx + span / 2.0};
    ry = {cy - span / 2.0, cy + span / 2.0};
    rx.pad(0.08);
    ry.pad(0.08);

    std::ostringstream body;
    body << axes(rx, ry, "x [m]", "y [m]");
    body << polyline(sx, sy, rx, ry,
                     "stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
    body << polyline(px, py, rx, ry, "stroke=\"#1f77b4\" stroke-width=\"1.5\"");
    body << "<circle cx=\"" << rx.map(px[0], kMargin, kWidth - kMargin) << "\" cy=\""
         << ry.map(py[0], kHeight - kMargin, kMargin)
         << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    body << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kMargin - 10
         << "\" font-size=\"12\" text-anchor=\"end\">actual (solid), reference "
            "(dashed)</text>\n";
    write_svg(path, body.str());
}

void write_attitude_svg(const SimLog& log, const std::string& path) {
    if (log.empty()) {
        throw std::runtime_error("empty log");
    }
    const auto t = column(log, "t");
    const char* names[3] = {"roll", "pitch", "yaw"};
    const char* colors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
    std::vector<double> traces[3];
    Range rt{t.front(), t.back()}, ry{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        traces[k] = column(log, names[k]);
        for (double& v : traces[k]) {
            v = rad2deg(v);
            ry.include(v);
        }
    }
    ry.pad(0.15);

    std::ostringstream body;
    body << axes(rt, ry, "t [s]", "attitude [deg]");
    const double zero_y = ry.map(0.0, kHeight - kMargin, kMargin);
    body << "<line x1=\"" << kMargin << "\" x2=\"" << kWidth - kMargin << "\" y1=\""
         << zero_y << "\" y2=\"" << zero_y << "\" stroke=\"#ccc\"/>\n";
    for (int k = 0; k < 3; ++k) {
        body << polyline(t, traces[k], rt, ry,
                         "stroke=\"" + std::string(colors[k]) + "\" stroke-width=\"1.5\"");
        body << "<text x=\"" << kMargin + 10 + 70 * k << "\" y=\"" << kMargin - 10
             << "\" font-size=\"12\" fill=\"" << colors[k] << "\">" << names[k]
             << "</text>\n";
    }
    write_svg(path, body.str());
}

}  // namespace hexsim
