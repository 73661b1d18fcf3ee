#pragma once

#include <array>
#include <stdexcept>

#include "hexsim/geometry.hpp"

namespace hexsim {

enum class Frame { Top, Bottom };

/// Bottom-frame rotor layout. Balanced interleaves the two triads at 60
/// degrees so the position vectors sum to zero; Unbalanced flips the x sign
/// of rotor 6, leaving a thrust-proportional residual moment on the frame.
enum class BottomGeometry { Balanced, Unbalanced };

struct OutOfRange : std::runtime_error {
    explicit OutOfRange(const std::string& what) : std::runtime_error(what) {}
};

/// Static vehicle description: mass/inertia, frame offsets, rotor geometry
/// and the thrust/drag coefficients of the quadratic rotor model.
struct AirframeConfig {
    double mass = 0.8;             // kg
    double gravity = 9.8;          // m/s^2
    Vec3 inertia_body{0.0120, 0.0115, 0.0024};  // diagonal entries, kg m^2
    double h_top = 0.10;           // m, top frame center above CoM
    double h_bottom = 0.10;        // m, bottom frame center below CoM
    double arm_length = 0.15;      // m, frame center to rotor
    double c_lift = 1.0e-5;        // N s^2, thrust = c_lift * omega^2
    double c_drag = 2.0e-7;        // N m s^2, reaction torque = c_drag * omega^2
    double tilt_limit = deg2rad(20.0);  // rad, mechanical stop
    double omega_max = 1200.0;     // rad/s
    Vec2 inertia_frame{0.002, 0.002};   // kg m^2 about the joint axes
    double frame_damping = 0.01;   // N m s/rad, joint viscous damping
    BottomGeometry bottom_geometry = BottomGeometry::Balanced;
    int spin_direction_top = -1;   // CCW rotors -> CW (negative z) reaction
    int spin_direction_bottom = +1;

    std::array<Vec3, 3> rotor_positions_top() const;
    std::array<Vec3, 3> rotor_positions_bottom() const;
    std::array<Vec3, 3> rotor_positions(Frame frame) const;
    int spin_direction(Frame frame) const;

    /// Offset of the frame center from the body CoM: [0,0,h_t] or [0,0,-h_b].
    Vec3 frame_offset(Frame frame) const;

    /// Per-rotor speed that makes six equal rotors carry the weight.
    double hover_rotor_speed() const;
    /// PWM value mapping to that speed under u = (omega/omega_max)^2.
    double hover_pwm() const;
};

/// Six rotor speeds in rad/s; indices 0-2 top frame, 3-5 bottom frame.
struct RotorSpeeds {
    std::array<double, 6> omega{};

    std::array<double, 3> top() const { return {omega[0], omega[1], omega[2]}; }
    std::array<double, 3> bottom() const { return {omega[3], omega[4], omega[5]}; }
};

/// Resultant force and moment of one frame, expressed in that frame's
/// body-parallel coordinate system (B_t or B_b).
struct FrameWrench {
    Vec3 force = Vec3::Zero();
    Vec3 moment = Vec3::Zero();
};

/// Thrust of a single rotor, c_lift * omega^2. Throws OutOfRange outside
/// [0, omega_max].
double rotor_thrust(double omega, const AirframeConfig& cfg);

/// Resultant rotor force on one frame, in B_t/B_b.
Vec3 frame_force(const Vec2& tilt, const std::array<double, 3>& speeds,
                 const AirframeConfig& cfg, Frame frame);

/// Input moment on one frame (thrust levers plus rotor drag reaction), in B_t/B_b.
Vec3 frame_moment(const Vec2& tilt, const std::array<double, 3>& speeds,
                  const AirframeConfig& cfg, Frame frame);

FrameWrench frame_wrench(const Vec2& tilt, const std::array<double, 3>& speeds,
                         const AirframeConfig& cfg, Frame frame);

/// Total input moment on the central body: frame-force levers plus the z
/// components of the frame moments. The x/y frame moment components act on
/// the frames, not the body.
Vec3 body_moment(const FrameWrench& top, const FrameWrench& bottom,
                 const AirframeConfig& cfg);

/// Net world-frame force on the body: gravity plus rotated frame forces.
Vec3 body_force_world(const EulerAngles& att, const Vec3& top_force,
                      const Vec3& bottom_force, const AirframeConfig& cfg);

}  // namespace hexsim
