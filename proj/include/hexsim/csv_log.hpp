#pragma once

#include <string>

#include "hexsim/sim.hpp"

namespace hexsim {

/// Write a log as CSV: header row of column names, then one row per tick,
/// values formatted with 9 significant digits.
void write_csv(const SimLog& log, const std::string& path);

/// Read a CSV written by write_csv. Throws std::runtime_error on malformed
/// input or unreadable files.
SimLog read_csv(const std::string& path);

/// Render one CSV value exactly as the writer does.
std::string format_csv_value(double value);

}  // namespace hexsim
