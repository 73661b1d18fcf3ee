#include "hexsim/csv_log.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hexsim {

std::string format_csv_value(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

void write_csv(const SimLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    for (size_t i = 0; i < log.columns.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << log.columns[i];
    }
    out << '\n';
    for (const auto& row : log.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            out << format_csv_value(row[i]);
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

SimLog read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    SimLog log;
    std::string line;
    if (!std::getline(in, line) || line.empty()) {
        throw std::runtime_error(path + ": missing header row");
    }
    {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            log.columns.push_back(field);
        }
    }
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        row.reserve(log.columns.size());
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            char* end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            if (end == field.c_str()) {
                throw std::runtime_error(path + ": bad number at line " +
                                         std::to_string(line_no));
            }
            row.push_back(v);
        }
        if (row.size() != log.columns.size()) {
            throw std::runtime_error(path + ": wrong field count at line " +
                                     std::to_string(line_no));
        }
        log.rows.push_back(std::move(row));
    }
    return log;
}

}  // namespace hexsim
