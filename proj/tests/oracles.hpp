// Independent reference implementations used as test oracles. Plain double
// arrays and hand-written loops only; nothing here may call into hexsim
// production code.
#pragma once

#include <array>
#include <cmath>

namespace oracles {

using Mat = std::array<std::array<double, 3>, 3>;
using Vec = std::array<double, 3>;

inline Mat identity() {
    return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) {
                s += a[i][k] * b[k][j];
            }
            c[i][j] = s;
        }
    }
    return c;
}

inline Vec mat_vec(const Mat& a, const Vec& v) {
    Vec r{};
    for (int i = 0; i < 3; ++i) {
        r[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
    }
    return r;
}

inline Vec cross(const Vec& a, const Vec& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

inline Mat scale(const Mat& a, double s) {
    Mat r{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r[i][j] = a[i][j] * s;
        }
    }
    return r;
}

inline Mat add(const Mat& a, const Mat& b) {
    Mat r{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r[i][j] = a[i][j] + b[i][j];
        }
    }
    return r;
}

/// Matrix exponential of angle * skew(e_axis) by Taylor series; axis 0..2.
inline Mat expm_axis(int axis, double angle) {
    Mat skew{};
    const int i = (axis + 1) % 3;
    const int j = (axis + 2) % 3;
    skew[i][j] = -angle;
    skew[j][i] = angle;

    Mat result = identity();
    Mat term = identity();
    for (int n = 1; n <= 30; ++n) {
        term = scale(mat_mul(term, skew), 1.0 / n);
        result = add(result, term);
    }
    return result;
}

/// Matrix exponential of skew(w)*t by scaled Taylor series (general axis).
inline Mat expm_omega(const Vec& w, double t) {
    Mat skew = {{{0, -w[2] * t, w[1] * t},
                 {w[2] * t, 0, -w[0] * t},
                 {-w[1] * t, w[0] * t, 0}}};
    Mat result = identity();
    Mat term = identity();
    for (int n = 1; n <= 40; ++n) {
        term = scale(mat_mul(term, skew), 1.0 / n);
        result = add(result, term);
    }
    return result;
}

/// The tilt rotation exactly as printed: entries of R_x(phi)R_y(theta).
inline Mat tilt_rotation_printed(double phi, double theta) {
    const double cp = std::cos(phi);
    const double sp = std::sin(phi);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    return {{{ct, 0.0, st},
             {sp * st, cp, -ct * sp},
             {-cp * st, sp, cp * ct}}};
}

struct FrameGeometry {
    std::array<Vec, 3> rotor_positions;
    double spin;  // -1 top (CW reaction), +1 bottom (CCW reaction)
};

inline FrameGeometry top_geometry(double d) {
    const double s3 = std::sqrt(3.0);
    return {{{Vec{d / 2.0, s3 / 2.0 * d, 0.0}, Vec{-d, 0.0, 0.0},
              Vec{d / 2.0, -s3 / 2.0 * d, 0.0}}},
            -1.0};
}

inline FrameGeometry bottom_geometry(double d, bool balanced) {
    const double s3 = std::sqrt(3.0);
    const double r6x = balanced ? -d / 2.0 : d / 2.0;
    return {{{Vec{d, 0.0, 0.0}, Vec{-d / 2.0, s3 / 2.0 * d, 0.0},
              Vec{r6x, -s3 / 2.0 * d, 0.0}}},
            1.0};
}

struct Wrench {
    Vec force{};
    Vec moment{};
};

/// Per-rotor rotate/cross/sum of the frame wrench: each rotor's thrust and
/// drag torque rotated individually, lever arms crossed in the tilted frame.
inline Wrench frame_wrench_brute(double phi, double theta,
                                 const std::array<double, 3>& speeds,
                                 double c_lift, double c_drag,
                                 const FrameGeometry& geom) {
    const Mat rot = tilt_rotation_printed(phi, theta);
    Wrench w;
    for (int i = 0; i < 3; ++i) {
        const double w2 = speeds[static_cast<size_t>(i)] * speeds[static_cast<size_t>(i)];
        const Vec thrust = {0.0, 0.0, c_lift * w2};
        const Vec drag = {0.0, 0.0, geom.spin * c_drag * w2};

        const Vec rotated_thrust = mat_vec(rot, thrust);
        const Vec lever = mat_vec(rot, cross(geom.rotor_positions[static_cast<size_t>(i)], thrust));
        const Vec rotated_drag = mat_vec(rot, drag);
        for (int k = 0; k < 3; ++k) {
            w.force[static_cast<size_t>(k)] += rotated_thrust[static_cast<size_t>(k)];
            w.moment[static_cast<size_t>(k)] += lever[static_cast<size_t>(k)] + rotated_drag[static_cast<size_t>(k)];
        }
    }
    return w;
}

}  // namespace oracles
