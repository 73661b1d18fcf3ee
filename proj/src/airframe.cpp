#include "hexsim/airframe.hpp"

#include <cmath>
#include <string>

namespace hexsim {

namespace {
constexpr double kSqrt3 = 1.7320508075688772;
}

std::array<Vec3, 3> AirframeConfig::rotor_positions_top() const {
    const double d = arm_length;
    return {Vec3{d / 2.0, kSqrt3 / 2.0 * d, 0.0},
            Vec3{-d, 0.0, 0.0},
            Vec3{d / 2.0, -kSqrt3 / 2.0 * d, 0.0}};
}

std::array<Vec3, 3> AirframeConfig::rotor_positions_bottom() const {
    const double d = arm_length;
    const double r6x = bottom_geometry == BottomGeometry::Balanced ? -d / 2.0 : d / 2.0;
    return {Vec3{d, 0.0, 0.0},
            Vec3{-d / 2.0, kSqrt3 / 2.0 * d, 0.0},
            Vec3{r6x, -kSqrt3 / 2.0 * d, 0.0}};
}

std::array<Vec3, 3> AirframeConfig::rotor_positions(Frame frame) const {
    return frame == Frame::Top ? rotor_positions_top() : rotor_positions_bottom();
}

int AirframeConfig::spin_direction(Frame frame) const {
    return frame == Frame::Top ? spin_direction_top : spin_direction_bottom;
}

Vec3 AirframeConfig::frame_offset(Frame frame) const {
    return frame == Frame::Top ? Vec3{0.0, 0.0, h_top} : Vec3{0.0, 0.0, -h_bottom};
}

double AirframeConfig::hover_rotor_speed() const {
    return std::sqrt(mass * gravity / (6.0 * c_lift));
}

double AirframeConfig::hover_pwm() const {
    return mass * gravity / 6.0 / (c_lift * omega_max * omega_max);
}

double rotor_thrust(double omega, const AirframeConfig& cfg) {
    if (!(omega >= 0.0) || omega > cfg.omega_max) {
        throw OutOfRange("rotor speed " + std::to_string(omega) + " outside [0, " +
                         std::to_string(cfg.omega_max) + "] rad/s");
    }
    return cfg.c_lift * omega * omega;
}

Vec3 frame_force(const Vec2& tilt, const std::array<double, 3>& speeds,
                 const AirframeConfig& cfg, Frame /*frame*/) {
    double total = 0.0;
    for (double w : speeds) {
        total += rotor_thrust(w, cfg);
    }
    // Every rotor thrust points along the frame z axis, so the sum collapses
    // to the rotated common direction.
    return frame_tilt_rotation(tilt).col(2) * total;
}

Vec3 frame_moment(const Vec2& tilt, const std::array<double, 3>& speeds,
                  const AirframeConfig& cfg, Frame frame) {
    const auto positions = cfg.rotor_positions(frame);
    const double spin = static_cast<double>(cfg.spin_direction(frame));
    Vec3 lever = Vec3::Zero();
    double drag = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double thrust = rotor_thrust(speeds[static_cast<size_t>(i)], cfg);
        // r x [0,0,f] = [ry*f, -rx*f, 0]
        lever.x() += positions[static_cast<size_t>(i)].y() * thrust;
        lever.y() -= positions[static_cast<size_t>(i)].x() * thrust;
        drag += spin * cfg.c_drag * speeds[static_cast<size_t>(i)] * speeds[static_cast<size_t>(i)];
    }
    return frame_tilt_rotation(tilt) * (lever + Vec3{0.0, 0.0, drag});
}

FrameWrench frame_wrench(const Vec2& tilt, const std::array<double, 3>& speeds,
                         const AirframeConfig& cfg, Frame frame) {
    return {frame_force(tilt, speeds, cfg, frame), frame_moment(tilt, speeds, cfg, frame)};
}

Vec3 body_moment(const FrameWrench& top, const FrameWrench& bottom,
                 const AirframeConfig& cfg) {
    Vec3 m = cfg.frame_offset(Frame::Top).cross(top.force) +
             cfg.frame_offset(Frame::Bottom).cross(bottom.force);
    m.z() += top.moment.z() + bottom.moment.z();
    return m;
}

Vec3 body_force_world(const EulerAngles& att, const Vec3& top_force,
                      const Vec3& bottom_force, const AirframeConfig& cfg) {
    return Vec3{0.0, 0.0, -cfg.mass * cfg.gravity} +
           body_rotation(att) * (top_force + bottom_force);
}

}  // namespace hexsim
