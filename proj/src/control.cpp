#include "hexsim/control.hpp"

#include <algorithm>
#include <cmath>

namespace hexsim {

namespace {

double clamp_sym(double value, double limit) {
    return std::clamp(value, -limit, limit);
}

// Allocation matrices; rows are motors, columns are
// (altitude, frame pitch, frame roll, yaw).
constexpr double kAllocTop[3][4] = {
    {1.0, -0.5, 1.0, -1.0},
    {1.0, 1.0, 0.0, -1.0},
    {1.0, -0.5, -1.0, -1.0},
};
constexpr double kAllocBottom[3][4] = {
    {1.0, -1.0, 0.0, 1.0},
    {1.0, 0.5, 1.0, 1.0},
    {1.0, 0.5, -1.0, 1.0},
};

}  // namespace

PidResult pid_step(const PidGains& gains, const PidState& state, double target,
                   double measured, double target_rate, double measured_rate,
                   double dt) {
    const double error = target - measured;
    const double error_rate = target_rate - measured_rate;

    PidResult r;
    r.state.integral = clamp_sym(state.integral + error * dt, gains.integral_limit);
    r.state.prev_error = error;
    r.state.prev_time = state.prev_time + dt;

    const double raw = gains.kp * error + gains.kd * error_rate + gains.ki * r.state.integral;
    r.output = clamp_sym(raw, gains.output_limit);
    return r;
}

BodyOuterOutputs body_outer_loop(const Setpoint& sp, const VehicleState& state,
                                 const ControllerGains& gains, ControllerMemory& mem,
                                 double dt) {
    BodyOuterOutputs out;

    const PidGains* pos_gains[3] = {&gains.pos_x, &gains.pos_y, &gains.pos_z};
    for (int i = 0; i < 3; ++i) {
        PidResult r = pid_step(*pos_gains[i], mem.pos[i], sp.position(i), state.position(i),
                               sp.velocity_ff(i), state.velocity(i), dt);
        mem.pos[i] = r.state;
        out.velocity_ref(i) = r.output + sp.velocity_ff(i);
    }

    const PidGains* att_gains[3] = {&gains.att_roll, &gains.att_pitch, &gains.att_yaw};
    const double att_sp[3] = {sp.attitude.roll, sp.attitude.pitch, sp.attitude.yaw};
    const double att_m[3] = {state.attitude.roll, state.attitude.pitch, state.attitude.yaw};
    Vec3 euler_rate_ref;
    for (int i = 0; i < 3; ++i) {
        // Angular errors live on the circle; only yaw ever approaches the
        // wrap in practice but the treatment is uniform.
        const double err = wrap_angle(att_sp[i] - att_m[i]);
        PidResult r = pid_step(*att_gains[i], mem.att[i], err, 0.0, 0.0,
                               state.body_rates(i), dt);
        mem.att[i] = r.state;
        euler_rate_ref(i) = r.output;
    }
    out.body_rate_ref = euler_rate_matrix_inverse(state.attitude) * euler_rate_ref;
    return out;
}

BodyInnerOutputs body_inner_loop(const BodyOuterOutputs& refs, const VehicleState& state,
                                 const ControllerGains& gains, ControllerMemory& mem,
                                 double dt) {
    BodyInnerOutputs out;

    const PidGains* vel_gains[3] = {&gains.vel_x, &gains.vel_y, &gains.vel_z};
    for (int i = 0; i < 3; ++i) {
        PidResult r = pid_step(*vel_gains[i], mem.vel[i], refs.velocity_ref(i),
                               state.velocity(i), 0.0, 0.0, dt);
        mem.vel[i] = r.state;
        out.accel_cmd(i) = r.output;
    }

    const PidGains* rate_gains[3] = {&gains.rate_roll, &gains.rate_pitch, &gains.rate_yaw};
    for (int i = 0; i < 3; ++i) {
        PidResult r = pid_step(*rate_gains[i], mem.rate[i], refs.body_rate_ref(i),
                               state.body_rates(i), 0.0, 0.0, dt);
        mem.rate[i] = r.state;
        out.ang_accel_cmd(i) = r.output;
    }
    return out;
}

FrameReferences frame_reference_mix(const Vec3& accel_cmd_body, const Vec3& ang_accel_cmd,
                                    const Vec2& attitude_comp,
                                    const MixingConfig& mixing, double tilt_limit) {
    // Common mode: tilt both frames toward the commanded acceleration. A +x
    // command needs +pitch; a +y command needs -roll (the tilt rotation sends
    // +roll thrust toward -y). Measured body roll/pitch subtracts out so the
    // world-frame thrust direction stays on the command.
    const double common_pitch = mixing.k_trans * accel_cmd_body.x() - attitude_comp(1);
    const double common_roll = -mixing.k_trans * accel_cmd_body.y() - attitude_comp(0);
    // Differential mode: opposite tilts couple into a body torque.
    const double diff_roll = mixing.k_att * ang_accel_cmd.x();
    const double diff_pitch = mixing.k_att * ang_accel_cmd.y();

    FrameReferences refs;
    refs.top(0) = clamp_sym(common_roll + diff_roll, tilt_limit);
    refs.top(1) = clamp_sym(common_pitch + diff_pitch, tilt_limit);
    refs.bottom(0) = clamp_sym(common_roll - diff_roll, tilt_limit);
    refs.bottom(1) = clamp_sym(common_pitch - diff_pitch, tilt_limit);
    return refs;
}

Vec2 frame_loop(const Vec2& reference, const Vec2& tilt, const Vec2& tilt_rate,
                const ControllerGains& gains, PidState att_state[2],
                PidState rate_state[2], double dt, Vec2* rate_ref_out) {
    const PidGains* att_gains[2] = {&gains.frame_att_roll, &gains.frame_att_pitch};
    const PidGains* rate_gains[2] = {&gains.frame_rate_roll, &gains.frame_rate_pitch};

    Vec2 channels;
    Vec2 rate_ref;
    for (int axis = 0; axis < 2; ++axis) {
        PidResult att = pid_step(*att_gains[axis], att_state[axis], reference(axis),
                                 tilt(axis), 0.0, tilt_rate(axis), dt);
        att_state[axis] = att.state;
        rate_ref(axis) = att.output;

        PidResult rate = pid_step(*rate_gains[axis], rate_state[axis], rate_ref(axis),
                                  tilt_rate(axis), 0.0, 0.0, dt);
        rate_state[axis] = rate.state;
        channels(axis) = rate.output;
    }
    if (rate_ref_out != nullptr) {
        *rate_ref_out = rate_ref;
    }
    return channels;
}

AllocationResult allocate(const CommandVector& top, const CommandVector& bottom,
                          const AllocationConfig& alloc, double hover_pwm) {
    const double top_ch[4] = {alloc.scale_thrust * top.thrust,
                              alloc.scale_pitch * top.frame_pitch,
                              alloc.scale_roll * top.frame_roll,
                              alloc.scale_yaw * top.yaw};
    const double bottom_ch[4] = {alloc.scale_thrust * bottom.thrust,
                                 alloc.scale_pitch * bottom.frame_pitch,
                                 alloc.scale_roll * bottom.frame_roll,
                                 alloc.scale_yaw * bottom.yaw};

    AllocationResult r;
    for (int m = 0; m < 3; ++m) {
        double acc_top = 0.0;
        double acc_bottom = 0.0;
        for (int c = 0; c < 4; ++c) {
            acc_top += kAllocTop[m][c] * top_ch[c];
            acc_bottom += kAllocBottom[m][c] * bottom_ch[c];
        }
        r.pre_clamp[static_cast<size_t>(m)] = hover_pwm + alloc.k * acc_top;
        r.pre_clamp[static_cast<size_t>(m) + 3] = hover_pwm + alloc.k * acc_bottom;
    }
    for (int m = 0; m < 6; ++m) {
        const double u = std::clamp(r.pre_clamp[static_cast<size_t>(m)], 0.0, 1.0);
        if (u != r.pre_clamp[static_cast<size_t>(m)]) {
            r.saturated = true;
        }
        r.outputs.u[static_cast<size_t>(m)] = u;
    }
    return r;
}

double pwm_to_speed(double u, const AirframeConfig& cfg) {
    return cfg.omega_max * std::sqrt(std::clamp(u, 0.0, 1.0));
}

RotorSpeeds speeds_from_outputs(const ActuatorOutputs& outputs, const AirframeConfig& cfg) {
    RotorSpeeds s;
    for (size_t i = 0; i < 6; ++i) {
        s.omega[i] = pwm_to_speed(outputs.u[i], cfg);
    }
    return s;
}

TickResult controller_tick(const Setpoint& sp, const VehicleState& measured,
                           const ControllerMemory& memory, double dt,
                           const ControllerConfig& cfg, const AirframeConfig& airframe) {
    TickResult result;
    result.memory = memory;
    ControllerMemory& mem = result.memory;

    if (!measured.finite()) {
        mem.hold_active = true;
        result.outputs = mem.last_outputs;
        result.diagnostics.hold_last = true;
        ++mem.tick;
        return result;
    }
    mem.hold_active = false;

    const int outer_divisor =
        std::max(1, static_cast<int>(std::lround(cfg.rate_inner_hz / cfg.rate_outer_hz)));
    if (mem.tick % static_cast<std::uint64_t>(outer_divisor) == 0) {
        const double outer_dt = dt * outer_divisor;
        mem.outer = body_outer_loop(sp, measured, cfg.gains, mem, outer_dt);
    }

    BodyInnerOutputs inner = body_inner_loop(mem.outer, measured, cfg.gains, mem, dt);

    // Jerk-limit growth of the lateral acceleration command: the slower the
    // common tilt ramps, the better the rate loop cancels the joint damping
    // reaction concurrently. Reductions toward zero stay instant so braking
    // authority is not delayed.
    if (cfg.mixing.accel_slew > 0.0) {
        const double max_delta = cfg.mixing.accel_slew * dt;
        for (int i = 0; i < 2; ++i) {
            const double prev = mem.prev_accel_xy(i);
            const double cand = inner.accel_cmd(i);
            if (cand >= prev) {
                inner.accel_cmd(i) = std::min(cand, std::max(prev, 0.0) + max_delta);
            } else {
                inner.accel_cmd(i) = std::max(cand, std::min(prev, 0.0) - max_delta);
            }
        }
    }
    mem.prev_accel_xy = inner.accel_cmd.head<2>();

    // The frames tilt about body axes; the world-frame horizontal
    // acceleration command is expressed in the yaw-aligned frame first.
    const double cy = std::cos(measured.attitude.yaw);
    const double sy = std::sin(measured.attitude.yaw);
    Vec3 accel_body = inner.accel_cmd;
    accel_body.x() = cy * inner.accel_cmd.x() + sy * inner.accel_cmd.y();
    accel_body.y() = -sy * inner.accel_cmd.x() + cy * inner.accel_cmd.y();

    const Vec2 attitude_comp =
        cfg.mixing.attitude_compensation
            ? Vec2{measured.attitude.roll, measured.attitude.pitch}
            : Vec2::Zero();
    const FrameReferences frame_refs = frame_reference_mix(
        accel_body, inner.ang_accel_cmd, attitude_comp, cfg.mixing, airframe.tilt_limit);

    Vec2 top_rate_ref, bottom_rate_ref;
    const Vec2 top_channels =
        frame_loop(frame_refs.top, measured.top_tilt, measured.top_tilt_rate, cfg.gains,
                   mem.frame_att_top, mem.frame_rate_top, dt, &top_rate_ref);
    const Vec2 bottom_channels =
        frame_loop(frame_refs.bottom, measured.bottom_tilt, measured.bottom_tilt_rate,
                   cfg.gains, mem.frame_att_bottom, mem.frame_rate_bottom, dt,
                   &bottom_rate_ref);

    CommandVector top_cmd;
    top_cmd.thrust = inner.accel_cmd.z();
    top_cmd.frame_roll = top_channels(0);
    top_cmd.frame_pitch = top_channels(1);
    top_cmd.yaw = inner.ang_accel_cmd.z();
    CommandVector bottom_cmd;
    bottom_cmd.thrust = inner.accel_cmd.z();
    bottom_cmd.frame_roll = bottom_channels(0);
    bottom_cmd.frame_pitch = bottom_channels(1);
    bottom_cmd.yaw = inner.ang_accel_cmd.z();

    const AllocationResult alloc = allocate(top_cmd, bottom_cmd, cfg.allocation,
                                            airframe.hover_pwm());

    result.outputs = alloc.outputs;
    mem.last_outputs = alloc.outputs;
    ++mem.tick;

    ControlDiagnostics& d = result.diagnostics;
    d.velocity_ref = mem.outer.velocity_ref;
    d.body_rate_ref = mem.outer.body_rate_ref;
    d.accel_cmd = inner.accel_cmd;
    d.ang_accel_cmd = inner.ang_accel_cmd;
    d.frame_refs = frame_refs;
    d.frame_rate_ref_top = top_rate_ref;
    d.frame_rate_ref_bottom = bottom_rate_ref;
    d.top_command = top_cmd;
    d.bottom_command = bottom_cmd;
    d.pwm_pre_clamp = alloc.pre_clamp;
    d.saturated = alloc.saturated;
    return result;
}

}  // namespace hexsim
