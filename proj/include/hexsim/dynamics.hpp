#pragma once

#include <array>
#include <stdexcept>

#include "hexsim/airframe.hpp"
#include "hexsim/geometry.hpp"

namespace hexsim {

struct NonFiniteState : std::runtime_error {
    NonFiniteState() : std::runtime_error("state left the finite domain") {}
};

/// Full simulation state. Tilt vectors are (roll, pitch) about the joint
/// axes, relative to the body; hard-stopped at +-tilt_limit.
struct VehicleState {
    Vec3 position = Vec3::Zero();      // world, m
    Vec3 velocity = Vec3::Zero();      // world, m/s
    EulerAngles attitude;              // body Z-Y-X, rad
    Vec3 body_rates = Vec3::Zero();    // body frame, rad/s
    Vec2 top_tilt = Vec2::Zero();      // rad
    Vec2 top_tilt_rate = Vec2::Zero(); // rad/s
    Vec2 bottom_tilt = Vec2::Zero();
    Vec2 bottom_tilt_rate = Vec2::Zero();

    static constexpr int kDim = 20;
    std::array<double, kDim> pack() const;
    static VehicleState unpack(const std::array<double, kDim>& x);
    bool finite() const;
};

/// Time derivative of VehicleState, same packing order.
struct StateDerivative {
    Vec3 position_dot = Vec3::Zero();
    Vec3 velocity_dot = Vec3::Zero();
    EulerAngles attitude_dot;
    Vec3 body_rates_dot = Vec3::Zero();
    Vec2 top_tilt_dot = Vec2::Zero();
    Vec2 top_tilt_rate_dot = Vec2::Zero();
    Vec2 bottom_tilt_dot = Vec2::Zero();
    Vec2 bottom_tilt_rate_dot = Vec2::Zero();

    std::array<double, VehicleState::kDim> pack() const;
};

/// Euler rotational dynamics: omega_dot = I^-1 (-omega x I omega + moment).
Vec3 body_rotational_accel(const Vec3& body_rates, const Vec3& moment,
                           const AirframeConfig& cfg);

/// Newton translational dynamics; world_force already includes gravity.
Vec3 body_translational_accel(const Vec3& world_force, const AirframeConfig& cfg);

/// Tilt acceleration of one passive frame about its joint axes. The frame is
/// a damped 2-DOF rotor driven by the x/y components of its input moment;
/// at a hard stop an outward-pushing acceleration is zeroed (inelastic stop).
Vec2 frame_tilt_accel(const Vec2& tilt, const Vec2& tilt_rate,
                      const Vec2& moment_xy, const Vec2& body_coupling,
                      const AirframeConfig& cfg);

/// Full continuous-time right-hand side. Throws GimbalSingularity near
/// |pitch| = pi/2.
StateDerivative state_derivative(const VehicleState& state, const RotorSpeeds& speeds,
                                 const AirframeConfig& cfg);

/// One classic RK4 step followed by tilt-stop projection. dt must lie in
/// (0, 0.01] s. Throws NonFiniteState on divergence.
VehicleState step(const VehicleState& state, const RotorSpeeds& speeds, double dt,
                  const AirframeConfig& cfg);

/// Analytic hover fixed point at a given position.
VehicleState hover_state(const Vec3& position);
RotorSpeeds hover_speeds(const AirframeConfig& cfg);

/// Rotational kinetic energy 0.5 * omega^T I omega.
double rotational_energy(const VehicleState& state, const AirframeConfig& cfg);

}  // namespace hexsim
