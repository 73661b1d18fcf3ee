#include "hexsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

namespace hexsim {

VehicleState InitialState::to_state() const {
    VehicleState s;
    s.position = position;
    s.velocity = velocity;
    s.attitude = attitude;
    return s;
}

int SimLog::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

double quantize_csv(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return std::strtod(buf, nullptr);
}

Setpoint circle_reference(double t, const CircleSpec& spec) {
    const double w = 2.0 * kPi / spec.period;
    Setpoint sp;
    sp.position = Vec3{spec.center.x() - spec.radius * std::cos(w * t),
                       spec.center.y() - spec.radius * std::sin(w * t),
                       spec.altitude};
    sp.velocity_ff = Vec3{spec.radius * w * std::sin(w * t),
                          -spec.radius * w * std::cos(w * t), 0.0};
    return sp;
}

Setpoint trajectory_setpoint(double t, const TrajectorySpec& traj) {
    switch (traj.type) {
        case TrajectoryType::Hover: {
            Setpoint sp;
            sp.position = traj.hover_position;
            return sp;
        }
        case TrajectoryType::Circle:
            return circle_reference(t, traj.circle);
        case TrajectoryType::SetpointSequence: {
            Setpoint sp;
            for (const SequencePoint& p : traj.sequence) {
                if (t >= p.time) {
                    sp.position = p.position;
                    sp.attitude = p.attitude;
                }
            }
            return sp;
        }
        case TrajectoryType::StepTest: {
            Setpoint sp;
            sp.position = traj.hover_position;
            if (t >= traj.step.step_time) {
                switch (traj.step.axis) {
                    case StepAxis::X: sp.position.x() += traj.step.magnitude; break;
                    case StepAxis::Y: sp.position.y() += traj.step.magnitude; break;
                    case StepAxis::Z: sp.position.z() += traj.step.magnitude; break;
                    case StepAxis::Roll: sp.attitude.roll = traj.step.magnitude; break;
                    case StepAxis::Pitch: sp.attitude.pitch = traj.step.magnitude; break;
                    case StepAxis::Yaw: sp.attitude.yaw = traj.step.magnitude; break;
                }
            }
            return sp;
        }
    }
    return Setpoint{};
}

const std::vector<std::string>& log_columns() {
    static const std::vector<std::string> cols = {
        "t",
        "px", "py", "pz", "vx", "vy", "vz",
        "roll", "pitch", "yaw", "wx", "wy", "wz",
        "top_tilt_roll", "top_tilt_pitch", "top_rate_roll", "top_rate_pitch",
        "bot_tilt_roll", "bot_tilt_pitch", "bot_rate_roll", "bot_rate_pitch",
        "sp_px", "sp_py", "sp_pz", "sp_roll", "sp_pitch", "sp_yaw",
        "sp_vx", "sp_vy", "sp_vz",
        "vel_ref_x", "vel_ref_y", "vel_ref_z",
        "rate_ref_roll", "rate_ref_pitch", "rate_ref_yaw",
        "acc_cmd_x", "acc_cmd_y", "acc_cmd_z",
        "angacc_cmd_roll", "angacc_cmd_pitch", "angacc_cmd_yaw",
        "frame_ref_top_roll", "frame_ref_top_pitch",
        "frame_ref_bot_roll", "frame_ref_bot_pitch",
        "frame_rate_ref_top_roll", "frame_rate_ref_top_pitch",
        "frame_rate_ref_bot_roll", "frame_rate_ref_bot_pitch",
        "frame_cmd_top_pitch", "frame_cmd_top_roll",
        "frame_cmd_bot_pitch", "frame_cmd_bot_roll",
        "u_pre_1", "u_pre_2", "u_pre_3", "u_pre_4", "u_pre_5", "u_pre_6",
        "u_1", "u_2", "u_3", "u_4", "u_5", "u_6",
        "omega_1", "omega_2", "omega_3", "omega_4", "omega_5", "omega_6",
        "saturated", "hold_last",
    };
    return cols;
}

namespace {

std::vector<double> make_row(double t, const VehicleState& s, const Setpoint& sp,
                             const ControlDiagnostics& d, const ActuatorOutputs& u,
                             const RotorSpeeds& speeds) {
    std::vector<double> row;
    row.reserve(log_columns().size());
    auto push = [&row](double v) { row.push_back(quantize_csv(v)); };

    push(t);
    push(s.position.x()); push(s.position.y()); push(s.position.z());
    push(s.velocity.x()); push(s.velocity.y()); push(s.velocity.z());
    push(s.attitude.roll); push(s.attitude.pitch); push(s.attitude.yaw);
    push(s.body_rates.x()); push(s.body_rates.y()); push(s.body_rates.z());
    push(s.top_tilt(0)); push(s.top_tilt(1));
    push(s.top_tilt_rate(0)); push(s.top_tilt_rate(1));
    push(s.bottom_tilt(0)); push(s.bottom_tilt(1));
    push(s.bottom_tilt_rate(0)); push(s.bottom_tilt_rate(1));
    push(sp.position.x()); push(sp.position.y()); push(sp.position.z());
    push(sp.attitude.roll); push(sp.attitude.pitch); push(sp.attitude.yaw);
    push(sp.velocity_ff.x()); push(sp.velocity_ff.y()); push(sp.velocity_ff.z());
    push(d.velocity_ref.x()); push(d.velocity_ref.y()); push(d.velocity_ref.z());
    push(d.body_rate_ref.x()); push(d.body_rate_ref.y()); push(d.body_rate_ref.z());
    push(d.accel_cmd.x()); push(d.accel_cmd.y()); push(d.accel_cmd.z());
    push(d.ang_accel_cmd.x()); push(d.ang_accel_cmd.y()); push(d.ang_accel_cmd.z());
    push(d.frame_refs.top(0)); push(d.frame_refs.top(1));
    push(d.frame_refs.bottom(0)); push(d.frame_refs.bottom(1));
    push(d.frame_rate_ref_top(0)); push(d.frame_rate_ref_top(1));
    push(d.frame_rate_ref_bottom(0)); push(d.frame_rate_ref_bottom(1));
    push(d.top_command.frame_pitch); push(d.top_command.frame_roll);
    push(d.bottom_command.frame_pitch); push(d.bottom_command.frame_roll);
    for (double v : d.pwm_pre_clamp) push(v);
    for (double v : u.u) push(v);
    for (double v : speeds.omega) push(v);
    push(d.saturated ? 1.0 : 0.0);
    push(d.hold_last ? 1.0 : 0.0);
    return row;
}

struct NoiseSampler {
    std::mt19937_64 rng;
    std::normal_distribution<double> unit{0.0, 1.0};

    explicit NoiseSampler(std::uint64_t seed) : rng(seed) {}

    double draw(double sigma) { return sigma > 0.0 ? sigma * unit(rng) : 0.0; }
};

VehicleState apply_noise(const VehicleState& state, const NoiseConfig& noise,
                         NoiseSampler& sampler) {
    VehicleState m = state;
    for (int i = 0; i < 3; ++i) {
        m.position(i) += sampler.draw(noise.position_sigma);
        m.velocity(i) += sampler.draw(noise.velocity_sigma);
        m.body_rates(i) += sampler.draw(noise.rate_sigma);
    }
    m.attitude.roll += sampler.draw(noise.attitude_sigma);
    m.attitude.pitch += sampler.draw(noise.attitude_sigma);
    m.attitude.yaw += sampler.draw(noise.attitude_sigma);
    for (int i = 0; i < 2; ++i) {
        m.top_tilt(i) += sampler.draw(noise.frame_tilt_sigma);
        m.bottom_tilt(i) += sampler.draw(noise.frame_tilt_sigma);
        m.top_tilt_rate(i) += sampler.draw(noise.frame_rate_sigma);
        m.bottom_tilt_rate(i) += sampler.draw(noise.frame_rate_sigma);
    }
    return m;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& scenario) {
    RunResult result;
    result.log.columns = log_columns();
    result.log.metadata = {scenario.name, kVersion, scenario.seed, scenario.physics_dt,
                           scenario.duration};

    const double dt = scenario.physics_dt;
    const long n_steps = std::lround(scenario.duration / dt);
    const long ctrl_every =
        std::max(1L, std::lround(1.0 / (scenario.controller.rate_inner_hz * dt)));
    const double ctrl_dt = dt * static_cast<double>(ctrl_every);
    const long decimation = std::max(1, scenario.log_decimation);

    VehicleState state = scenario.initial.to_state();
    ControllerMemory memory;
    ControlDiagnostics diag;
    ActuatorOutputs outputs;
    RotorSpeeds speeds;
    NoiseSampler sampler(scenario.seed);

    const bool open_loop = scenario.open_loop_speeds.has_value();
    if (open_loop) {
        speeds.omega = *scenario.open_loop_speeds;
    }

    Setpoint sp = trajectory_setpoint(0.0, scenario.trajectory);

    auto diverge = [&](double t, const std::string& reason) {
        result.status = RunStatus::Diverged;
        result.divergence_reason = reason;
        result.end_time = t;
    };

    for (long i = 0; i <= n_steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        sp = trajectory_setpoint(t, scenario.trajectory);

        if (!open_loop && i % ctrl_every == 0) {
            const VehicleState measured =
                scenario.controller.noise.enabled
                    ? apply_noise(state, scenario.controller.noise, sampler)
                    : state;
            TickResult tick = controller_tick(sp, measured, memory, ctrl_dt,
                                              scenario.controller, scenario.airframe);
            memory = tick.memory;
            outputs = tick.outputs;
            diag = tick.diagnostics;
            speeds = speeds_from_outputs(outputs, scenario.airframe);
        }

        if (i % decimation == 0 || i == n_steps) {
            result.log.rows.push_back(make_row(t, state, sp, diag, outputs, speeds));
        }

        const double pos_error = (state.position - sp.position).norm();
        if (pos_error > scenario.divergence.max_position_error) {
            diverge(t, "position error exceeded bound");
            break;
        }
        if (i == n_steps) {
            result.end_time = t;
            break;
        }

        try {
            state = step(state, speeds, dt, scenario.airframe);
        } catch (const NonFiniteState&) {
            diverge(t, "non-finite state");
            break;
        } catch (const GimbalSingularity&) {
            diverge(t, "attitude reached the gimbal margin");
            break;
        }

        if (scenario.ground && state.position.z() <= 0.0) {
            if (state.velocity.z() < -scenario.divergence.ground_impact_speed) {
                diverge(t + dt, "ground impact");
                break;
            }
            state.position.z() = 0.0;
            if (state.velocity.z() < 0.0) {
                state.velocity = Vec3::Zero();
            }
        }
    }

    if (result.status == RunStatus::Completed) {
        const double window = scenario.metrics_window_start >= 0.0
                                  ? scenario.metrics_window_start
                                  : scenario.duration / 2.0;
        result.metrics = compute_metrics(result.log, window, scenario.settle_threshold);
    }
    return result;
}

TrackingMetrics compute_metrics(const SimLog& log, double window_start,
                                double settle_threshold) {
    const int it = log.column_index("t");
    const int ipx = log.column_index("px");
    const int isp = log.column_index("sp_px");
    const int iroll = log.column_index("roll");
    const int isp_roll = log.column_index("sp_roll");
    const int isat = log.column_index("saturated");
    if (it < 0 || ipx < 0 || isp < 0 || iroll < 0 || isp_roll < 0) {
        throw std::runtime_error("log is missing required columns");
    }

    TrackingMetrics m;
    double sum_pos_sq = 0.0;
    double sum_att_sq = 0.0;
    double sat_count = 0.0;
    long count = 0;
    double settled_since = -1.0;

    for (const std::vector<double>& row : log.rows) {
        const double t = row[static_cast<size_t>(it)];
        double pos_err_all = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double e = row[static_cast<size_t>(ipx + k)] - row[static_cast<size_t>(isp + k)];
            pos_err_all += e * e;
        }
        pos_err_all = std::sqrt(pos_err_all);

        // Settling is evaluated over the whole log, not just the window.
        if (pos_err_all <= settle_threshold) {
            if (settled_since < 0.0) {
                settled_since = t;
            }
        } else {
            settled_since = -1.0;
        }

        if (t < window_start) {
            continue;
        }
        double att_err_sq = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double e = wrap_angle(row[static_cast<size_t>(iroll + k)] -
                                        row[static_cast<size_t>(isp_roll + k)]);
            att_err_sq += e * e;
        }
        const double att_err = std::sqrt(att_err_sq);

        sum_pos_sq += pos_err_all * pos_err_all;
        sum_att_sq += att_err_sq;
        m.max_position_error = std::max(m.max_position_error, pos_err_all);
        m.max_attitude_error = std::max(m.max_attitude_error, att_err);
        if (isat >= 0 && row[static_cast<size_t>(isat)] > 0.5) {
            sat_count += 1.0;
        }
        ++count;
    }
    if (count == 0) {
        throw EmptyWindow();
    }
    m.rms_position_error = std::sqrt(sum_pos_sq / static_cast<double>(count));
    m.rms_attitude_error = std::sqrt(sum_att_sq / static_cast<double>(count));
    m.saturation_fraction = sat_count / static_cast<double>(count);
    m.settling_time = settled_since;
    return m;
}

DecouplingResult decoupling_test(StepAxis position_axis, double position_magnitude,
                                 StepAxis attitude_axis, double attitude_magnitude,
                                 const ScenarioConfig& base) {
    DecouplingResult result;

    ScenarioConfig pos_scenario = base;
    pos_scenario.name = base.name + "_position_step";
    pos_scenario.trajectory.type = TrajectoryType::StepTest;
    pos_scenario.trajectory.step.axis = position_axis;
    pos_scenario.trajectory.step.magnitude = position_magnitude;
    result.position_run = run_scenario(pos_scenario);

    ScenarioConfig att_scenario = base;
    att_scenario.name = base.name + "_attitude_step";
    att_scenario.trajectory.type = TrajectoryType::StepTest;
    att_scenario.trajectory.step.axis = attitude_axis;
    att_scenario.trajectory.step.magnitude = attitude_magnitude;
    result.attitude_run = run_scenario(att_scenario);

    const SimLog& plog = result.position_run.log;
    const int iroll = plog.column_index("roll");
    for (const auto& row : plog.rows) {
        for (int k = 0; k < 2; ++k) {  // roll, pitch only
            result.max_attitude_excursion =
                std::max(result.max_attitude_excursion,
                         std::abs(row[static_cast<size_t>(iroll + k)]));
        }
    }

    const SimLog& alog = result.attitude_run.log;
    const int ipx = alog.column_index("px");
    const int isp = alog.column_index("sp_px");
    for (const auto& row : alog.rows) {
        double horiz = 0.0;
        for (int k = 0; k < 2; ++k) {  // x, y only
            const double e = row[static_cast<size_t>(ipx + k)] - row[static_cast<size_t>(isp + k)];
            horiz += e * e;
        }
        result.max_position_excursion =
            std::max(result.max_position_excursion, std::sqrt(horiz));
    }
    return result;
}

}  // namespace hexsim
