#pragma once

#include <array>
#include <cstdint>

#include "hexsim/airframe.hpp"
#include "hexsim/dynamics.hpp"
#include "hexsim/geometry.hpp"

namespace hexsim {

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double integral_limit = 1.0e9;
    double output_limit = 1.0e9;
};

struct PidState {
    double integral = 0.0;
    double prev_error = 0.0;
    double prev_time = 0.0;
};

struct PidResult {
    double output = 0.0;
    PidState state;
};

/// One PID update: kp*e + kd*(target_rate - measured_rate) + ki*int(e),
/// rectangle-rule integral with anti-windup clamp, saturated output.
PidResult pid_step(const PidGains& gains, const PidState& state, double target,
                   double measured, double target_rate, double measured_rate,
                   double dt);

/// Position/attitude command from the planner level.
struct Setpoint {
    Vec3 position = Vec3::Zero();     // world, m
    EulerAngles attitude;             // rad
    Vec3 velocity_ff = Vec3::Zero();  // world, m/s
};

/// Four-channel command vector feeding one frame's allocation matrix:
/// (altitude, frame pitch, frame roll, yaw). Altitude and yaw are shared
/// between the two frames.
struct CommandVector {
    double thrust = 0.0;
    double frame_pitch = 0.0;
    double frame_roll = 0.0;
    double yaw = 0.0;
};

/// PWM outputs in [0,1], indices 0-2 top frame, 3-5 bottom frame.
struct ActuatorOutputs {
    std::array<double, 6> u{};
};

struct ControllerGains {
    PidGains pos_x, pos_y, pos_z;
    PidGains vel_x, vel_y, vel_z;
    PidGains att_roll, att_pitch, att_yaw;
    PidGains rate_roll, rate_pitch, rate_yaw;
    PidGains frame_att_roll, frame_att_pitch;
    PidGains frame_rate_roll, frame_rate_pitch;
};

/// Scale gains completing the reference mixing: translational acceleration
/// commands map to common-mode tilt via k_trans, angular acceleration
/// commands to differential tilt via k_att.
struct MixingConfig {
    double k_trans = 0.10204;  // rad per m/s^2
    double k_att = 0.0150;     // rad per rad/s^2
    double accel_slew = 0.0;   // m/s^3 cap on the lateral accel command; 0 = off
    // Subtract measured body roll/pitch from the common-mode tilt so the
    // thrust vector tracks the commanded world acceleration regardless of
    // body attitude (translation/attitude decoupling at the reference level).
    bool attitude_compensation = false;
};

struct AllocationConfig {
    double k = 0.0092593;      // output coefficient
    double scale_thrust = 1.0; // per-channel pre-scales
    double scale_pitch = 1.0;
    double scale_roll = 1.0;
    double scale_yaw = 1.0;
};

struct NoiseConfig {
    bool enabled = false;
    double position_sigma = 0.0;    // m, UWB-like
    double velocity_sigma = 0.0;    // m/s
    double attitude_sigma = 0.0;    // rad, IMU-like
    double rate_sigma = 0.0;        // rad/s
    double frame_tilt_sigma = 0.0;  // rad
    double frame_rate_sigma = 0.0;  // rad/s
};

struct ControllerConfig {
    double rate_outer_hz = 250.0;
    double rate_inner_hz = 1000.0;
    ControllerGains gains;
    MixingConfig mixing;
    AllocationConfig allocation;
    NoiseConfig noise;
};

/// Outer-loop outputs, held between outer updates.
struct BodyOuterOutputs {
    Vec3 velocity_ref = Vec3::Zero();   // world, m/s
    Vec3 body_rate_ref = Vec3::Zero();  // body, rad/s
};

struct BodyInnerOutputs {
    Vec3 accel_cmd = Vec3::Zero();      // world, m/s^2
    Vec3 ang_accel_cmd = Vec3::Zero();  // body, rad/s^2 (roll, pitch, yaw)
};

/// Tilt references for the two frames, (roll, pitch) rad.
struct FrameReferences {
    Vec2 top = Vec2::Zero();
    Vec2 bottom = Vec2::Zero();
};

struct AllocationResult {
    ActuatorOutputs outputs;
    std::array<double, 6> pre_clamp{};
    bool saturated = false;
};

struct ControllerMemory {
    std::uint64_t tick = 0;
    BodyOuterOutputs outer;
    Vec2 prev_accel_xy = Vec2::Zero();
    PidState pos[3], vel[3], att[3], rate[3];
    PidState frame_att_top[2], frame_rate_top[2];
    PidState frame_att_bottom[2], frame_rate_bottom[2];
    ActuatorOutputs last_outputs;
    bool hold_active = false;
};

/// Every intermediate channel of one controller tick, for logging.
struct ControlDiagnostics {
    Vec3 velocity_ref = Vec3::Zero();
    Vec3 body_rate_ref = Vec3::Zero();
    Vec3 accel_cmd = Vec3::Zero();
    Vec3 ang_accel_cmd = Vec3::Zero();
    FrameReferences frame_refs;
    Vec2 frame_rate_ref_top = Vec2::Zero();
    Vec2 frame_rate_ref_bottom = Vec2::Zero();
    CommandVector top_command;
    CommandVector bottom_command;
    std::array<double, 6> pwm_pre_clamp{};
    bool saturated = false;
    bool hold_last = false;
};

struct TickResult {
    ActuatorOutputs outputs;
    ControllerMemory memory;
    ControlDiagnostics diagnostics;
};

/// Position -> velocity reference (plus feedforward) and attitude -> body
/// rate reference. Yaw error wraps on the circle.
BodyOuterOutputs body_outer_loop(const Setpoint& sp, const VehicleState& state,
                                 const ControllerGains& gains, ControllerMemory& mem,
                                 double dt);

/// Velocity -> world acceleration commands and body rate -> angular
/// acceleration commands.
BodyInnerOutputs body_inner_loop(const BodyOuterOutputs& refs, const VehicleState& state,
                                 const ControllerGains& gains, ControllerMemory& mem,
                                 double dt);

/// Reference mixing: common-mode tilt realizes translation, differential
/// tilt realizes body roll/pitch torque. Acceleration commands are taken in
/// the body-yaw frame; attitude_comp holds the measured (roll, pitch) when
/// attitude compensation is enabled, zero otherwise. Outputs saturate at
/// tilt_limit.
FrameReferences frame_reference_mix(const Vec3& accel_cmd_body, const Vec3& ang_accel_cmd,
                                    const Vec2& attitude_comp,
                                    const MixingConfig& mixing, double tilt_limit);

/// Cascaded frame attitude -> rate -> channel PIDs for one frame.
Vec2 frame_loop(const Vec2& reference, const Vec2& tilt, const Vec2& tilt_rate,
                const ControllerGains& gains, PidState att_state[2],
                PidState rate_state[2], double dt, Vec2* rate_ref_out);

/// Thrust allocation: u = hover_pwm + k * A * diag(scales) * channels per
/// frame, clamped to [0,1]. Column signs follow the frame geometry; the yaw
/// column lowers the top frame and raises the bottom frame.
AllocationResult allocate(const CommandVector& top, const CommandVector& bottom,
                          const AllocationConfig& alloc, double hover_pwm);

/// PWM to rotor speed, omega = omega_max * sqrt(u): linear in thrust.
double pwm_to_speed(double u, const AirframeConfig& cfg);
RotorSpeeds speeds_from_outputs(const ActuatorOutputs& outputs, const AirframeConfig& cfg);

/// One inner-rate controller update. Outer loops run every
/// round(rate_inner/rate_outer) ticks and hold in between. Non-finite
/// measurements freeze the output at its previous value.
TickResult controller_tick(const Setpoint& sp, const VehicleState& measured,
                           const ControllerMemory& memory, double dt,
                           const ControllerConfig& cfg, const AirframeConfig& airframe);

}  // namespace hexsim
