#pragma once

#include <string>

#include "hexsim/sim.hpp"

namespace hexsim {

/// Top-view trajectory plot: actual path with the reference (from the
/// sp_px/sp_py columns) overlaid dashed. Throws std::runtime_error on an
/// empty log or write failure.
void write_trajectory_svg(const SimLog& log, const std::string& path);

/// Attitude traces (roll/pitch/yaw, degrees) against time.
void write_attitude_svg(const SimLog& log, const std::string& path);

}  // namespace hexsim
