#include "hexsim/config_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hexsim {

using nlohmann::json;

void ValidationReport::merge(const ValidationReport& other) {
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

std::string ValidationReport::str() const {
    std::ostringstream out;
    for (const auto& e : errors) {
        out << "error: " << e << '\n';
    }
    for (const auto& w : warnings) {
        out << "warning: " << w << '\n';
    }
    return out.str();
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

namespace {

double get_num(const json& j, const std::string& key, ValidationReport& rep,
               const std::string& ctx, double fallback, bool required) {
    if (!j.contains(key)) {
        if (required) {
            rep.errors.push_back(ctx + ": missing field '" + key + "'");
        }
        return fallback;
    }
    if (!j.at(key).is_number()) {
        rep.errors.push_back(ctx + ": field '" + key + "' must be a number");
        return fallback;
    }
    return j.at(key).get<double>();
}

bool get_bool(const json& j, const std::string& key, ValidationReport& rep,
              const std::string& ctx, bool fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_boolean()) {
        rep.errors.push_back(ctx + ": field '" + key + "' must be a boolean");
        return fallback;
    }
    return j.at(key).get<bool>();
}

std::string get_str(const json& j, const std::string& key, ValidationReport& rep,
                    const std::string& ctx, const std::string& fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_string()) {
        rep.errors.push_back(ctx + ": field '" + key + "' must be a string");
        return fallback;
    }
    return j.at(key).get<std::string>();
}

bool get_vecn(const json& j, const std::string& key, ValidationReport& rep,
              const std::string& ctx, size_t n, double* out, bool required) {
    if (!j.contains(key)) {
        if (required) {
            rep.errors.push_back(ctx + ": missing field '" + key + "'");
        }
        return false;
    }
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != n) {
        rep.errors.push_back(ctx + ": field '" + key + "' must be an array of " +
                             std::to_string(n) + " numbers");
        return false;
    }
    for (size_t i = 0; i < n; ++i) {
        if (!a[i].is_number()) {
            rep.errors.push_back(ctx + ": field '" + key + "' must be numeric");
            return false;
        }
        out[i] = a[i].get<double>();
    }
    return true;
}

PidGains gains_from_json(const json& j, const std::string& name, ValidationReport& rep) {
    PidGains g;
    if (!j.contains(name)) {
        rep.errors.push_back("controller.gains: missing channel '" + name + "'");
        return g;
    }
    const json& c = j.at(name);
    const std::string ctx = "controller.gains." + name;
    g.kp = get_num(c, "kp", rep, ctx, 0.0, true);
    g.ki = get_num(c, "ki", rep, ctx, 0.0, true);
    g.kd = get_num(c, "kd", rep, ctx, 0.0, true);
    g.integral_limit = get_num(c, "integral_limit", rep, ctx, 1.0e9, false);
    g.output_limit = get_num(c, "output_limit", rep, ctx, 1.0e9, false);
    return g;
}

}  // namespace

AirframeConfig airframe_from_json(const json& j, ValidationReport& rep) {
    AirframeConfig cfg;
    const std::string ctx = "airframe";
    cfg.mass = get_num(j, "mass_kg", rep, ctx, cfg.mass, true);
    cfg.gravity = get_num(j, "gravity_mps2", rep, ctx, cfg.gravity, false);
    double inertia[3] = {cfg.inertia_body.x(), cfg.inertia_body.y(), cfg.inertia_body.z()};
    if (get_vecn(j, "inertia_body_kgm2", rep, ctx, 3, inertia, true)) {
        cfg.inertia_body = Vec3{inertia[0], inertia[1], inertia[2]};
    }
    cfg.h_top = get_num(j, "h_top_m", rep, ctx, cfg.h_top, true);
    cfg.h_bottom = get_num(j, "h_bottom_m", rep, ctx, cfg.h_bottom, true);
    cfg.arm_length = get_num(j, "arm_length_m", rep, ctx, cfg.arm_length, true);
    cfg.c_lift = get_num(j, "c_lift", rep, ctx, cfg.c_lift, true);
    cfg.c_drag = get_num(j, "c_drag", rep, ctx, cfg.c_drag, true);
    cfg.tilt_limit = deg2rad(get_num(j, "tilt_limit_deg", rep, ctx,
                                     rad2deg(cfg.tilt_limit), false));
    cfg.omega_max = get_num(j, "omega_max_radps", rep, ctx, cfg.omega_max, true);
    double frame_inertia[2] = {cfg.inertia_frame.x(), cfg.inertia_frame.y()};
    if (get_vecn(j, "inertia_frame_kgm2", rep, ctx, 2, frame_inertia, false)) {
        cfg.inertia_frame = Vec2{frame_inertia[0], frame_inertia[1]};
    }
    cfg.frame_damping = get_num(j, "frame_damping_nms", rep, ctx, cfg.frame_damping, false);
    const std::string geom = get_str(j, "bottom_geometry", rep, ctx, "balanced");
    if (geom == "balanced") {
        cfg.bottom_geometry = BottomGeometry::Balanced;
    } else if (geom == "unbalanced") {
        cfg.bottom_geometry = BottomGeometry::Unbalanced;
    } else {
        rep.errors.push_back("airframe: bottom_geometry must be 'balanced' or 'unbalanced'");
    }
    cfg.spin_direction_top =
        static_cast<int>(get_num(j, "spin_direction_top", rep, ctx, -1.0, false));
    cfg.spin_direction_bottom =
        static_cast<int>(get_num(j, "spin_direction_bottom", rep, ctx, 1.0, false));
    return cfg;
}

ControllerConfig controller_from_json(const json& j, ValidationReport& rep) {
    ControllerConfig cfg;
    const std::string ctx = "controller";
    cfg.rate_outer_hz = get_num(j, "rate_outer_hz", rep, ctx, cfg.rate_outer_hz, true);
    cfg.rate_inner_hz = get_num(j, "rate_inner_hz", rep, ctx, cfg.rate_inner_hz, true);

    if (!j.contains("gains") || !j.at("gains").is_object()) {
        rep.errors.push_back("controller: missing 'gains' object");
    } else {
        const json& g = j.at("gains");
        cfg.gains.pos_x = gains_from_json(g, "pos_x", rep);
        cfg.gains.pos_y = gains_from_json(g, "pos_y", rep);
        cfg.gains.pos_z = gains_from_json(g, "pos_z", rep);
        cfg.gains.vel_x = gains_from_json(g, "vel_x", rep);
        cfg.gains.vel_y = gains_from_json(g, "vel_y", rep);
        cfg.gains.vel_z = gains_from_json(g, "vel_z", rep);
        cfg.gains.att_roll = gains_from_json(g, "att_roll", rep);
        cfg.gains.att_pitch = gains_from_json(g, "att_pitch", rep);
        cfg.gains.att_yaw = gains_from_json(g, "att_yaw", rep);
        cfg.gains.rate_roll = gains_from_json(g, "rate_roll", rep);
        cfg.gains.rate_pitch = gains_from_json(g, "rate_pitch", rep);
        cfg.gains.rate_yaw = gains_from_json(g, "rate_yaw", rep);
        cfg.gains.frame_att_roll = gains_from_json(g, "frame_att_roll", rep);
        cfg.gains.frame_att_pitch = gains_from_json(g, "frame_att_pitch", rep);
        cfg.gains.frame_rate_roll = gains_from_json(g, "frame_rate_roll", rep);
        cfg.gains.frame_rate_pitch = gains_from_json(g, "frame_rate_pitch", rep);
    }

    if (j.contains("mixing")) {
        const json& m = j.at("mixing");
        cfg.mixing.k_trans = get_num(m, "k_trans", rep, "controller.mixing",
                                     cfg.mixing.k_trans, true);
        cfg.mixing.k_att = get_num(m, "k_att", rep, "controller.mixing",
                                   cfg.mixing.k_att, true);
        cfg.mixing.accel_slew = get_num(m, "accel_slew_mps3", rep, "controller.mixing",
                                        cfg.mixing.accel_slew, false);
        cfg.mixing.attitude_compensation =
            get_bool(m, "attitude_compensation", rep, "controller.mixing",
                     cfg.mixing.attitude_compensation);
    } else {
        rep.errors.push_back("controller: missing 'mixing' object");
    }

    if (j.contains("allocation")) {
        const json& a = j.at("allocation");
        const std::string actx = "controller.allocation";
        cfg.allocation.k = get_num(a, "k", rep, actx, cfg.allocation.k, true);
        cfg.allocation.scale_thrust =
            get_num(a, "scale_thrust", rep, actx, cfg.allocation.scale_thrust, false);
        cfg.allocation.scale_pitch =
            get_num(a, "scale_pitch", rep, actx, cfg.allocation.scale_pitch, false);
        cfg.allocation.scale_roll =
            get_num(a, "scale_roll", rep, actx, cfg.allocation.scale_roll, false);
        cfg.allocation.scale_yaw =
            get_num(a, "scale_yaw", rep, actx, cfg.allocation.scale_yaw, false);
    } else {
        rep.errors.push_back("controller: missing 'allocation' object");
    }

    if (j.contains("measurement_noise")) {
        const json& n = j.at("measurement_noise");
        const std::string nctx = "controller.measurement_noise";
        cfg.noise.enabled = get_bool(n, "enabled", rep, nctx, false);
        cfg.noise.position_sigma = get_num(n, "position_sigma_m", rep, nctx, 0.0, false);
        cfg.noise.velocity_sigma = get_num(n, "velocity_sigma_mps", rep, nctx, 0.0, false);
        cfg.noise.attitude_sigma = get_num(n, "attitude_sigma_rad", rep, nctx, 0.0, false);
        cfg.noise.rate_sigma = get_num(n, "rate_sigma_radps", rep, nctx, 0.0, false);
        cfg.noise.frame_tilt_sigma =
            get_num(n, "frame_tilt_sigma_rad", rep, nctx, 0.0, false);
        cfg.noise.frame_rate_sigma =
            get_num(n, "frame_rate_sigma_radps", rep, nctx, 0.0, false);
    }
    return cfg;
}

namespace {

TrajectorySpec trajectory_from_json(const json& j, const Vec3& initial_position,
                                    ValidationReport& rep) {
    TrajectorySpec traj;
    traj.hover_position = initial_position;
    const std::string ctx = "trajectory";
    const std::string type = get_str(j, "type", rep, ctx, "");
    double v3[3];

    if (type == "hover") {
        traj.type = TrajectoryType::Hover;
        if (get_vecn(j, "position", rep, ctx, 3, v3, false)) {
            traj.hover_position = Vec3{v3[0], v3[1], v3[2]};
        }
    } else if (type == "circle") {
        traj.type = TrajectoryType::Circle;
        if (get_vecn(j, "center", rep, ctx, 3, v3, true)) {
            traj.circle.center = Vec3{v3[0], v3[1], v3[2]};
        }
        traj.circle.radius = get_num(j, "radius_m", rep, ctx, traj.circle.radius, true);
        traj.circle.period = get_num(j, "period_s", rep, ctx, traj.circle.period, true);
        traj.circle.altitude =
            get_num(j, "altitude_m", rep, ctx, traj.circle.center.z(), false);
    } else if (type == "setpoint_sequence") {
        traj.type = TrajectoryType::SetpointSequence;
        if (!j.contains("points") || !j.at("points").is_array() || j.at("points").empty()) {
            rep.errors.push_back("trajectory: setpoint_sequence needs a 'points' array");
        } else {
            for (const json& p : j.at("points")) {
                SequencePoint pt;
                pt.time = get_num(p, "t_s", rep, "trajectory.points[]", 0.0, true);
                if (get_vecn(p, "position", rep, "trajectory.points[]", 3, v3, true)) {
                    pt.position = Vec3{v3[0], v3[1], v3[2]};
                }
                if (get_vecn(p, "attitude_deg", rep, "trajectory.points[]", 3, v3, false)) {
                    pt.attitude = {deg2rad(v3[0]), deg2rad(v3[1]), deg2rad(v3[2])};
                }
                traj.sequence.push_back(pt);
            }
        }
    } else if (type == "step_test") {
        traj.type = TrajectoryType::StepTest;
        if (get_vecn(j, "position", rep, ctx, 3, v3, false)) {
            traj.hover_position = Vec3{v3[0], v3[1], v3[2]};
        }
        const std::string axis = get_str(j, "axis", rep, ctx, "x");
        if (axis == "x") traj.step.axis = StepAxis::X;
        else if (axis == "y") traj.step.axis = StepAxis::Y;
        else if (axis == "z") traj.step.axis = StepAxis::Z;
        else if (axis == "roll") traj.step.axis = StepAxis::Roll;
        else if (axis == "pitch") traj.step.axis = StepAxis::Pitch;
        else if (axis == "yaw") traj.step.axis = StepAxis::Yaw;
        else rep.errors.push_back("trajectory: unknown step axis '" + axis + "'");
        const bool angular = traj.step.axis == StepAxis::Roll ||
                             traj.step.axis == StepAxis::Pitch ||
                             traj.step.axis == StepAxis::Yaw;
        if (angular) {
            traj.step.magnitude =
                deg2rad(get_num(j, "magnitude_deg", rep, ctx, 5.0, true));
        } else {
            traj.step.magnitude = get_num(j, "magnitude_m", rep, ctx, 0.5, true);
        }
        traj.step.step_time = get_num(j, "step_time_s", rep, ctx, 1.0, false);
    } else {
        rep.errors.push_back("trajectory: unknown type '" + type + "'");
    }
    return traj;
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j, ValidationReport& rep) {
    ScenarioConfig cfg;
    const std::string ctx = "scenario";
    cfg.name = get_str(j, "name", rep, ctx, cfg.name);

    if (j.contains("airframe") && j.at("airframe").is_object()) {
        cfg.airframe = airframe_from_json(j.at("airframe"), rep);
    } else {
        rep.errors.push_back("scenario: missing 'airframe' object");
    }
    if (j.contains("controller") && j.at("controller").is_object()) {
        cfg.controller = controller_from_json(j.at("controller"), rep);
    } else {
        rep.errors.push_back("scenario: missing 'controller' object");
    }

    double v3[3];
    if (j.contains("initial") && j.at("initial").is_object()) {
        const json& init = j.at("initial");
        if (get_vecn(init, "position", rep, "initial", 3, v3, true)) {
            cfg.initial.position = Vec3{v3[0], v3[1], v3[2]};
        }
        if (get_vecn(init, "velocity", rep, "initial", 3, v3, false)) {
            cfg.initial.velocity = Vec3{v3[0], v3[1], v3[2]};
        }
        if (get_vecn(init, "attitude_deg", rep, "initial", 3, v3, false)) {
            cfg.initial.attitude = {deg2rad(v3[0]), deg2rad(v3[1]), deg2rad(v3[2])};
        }
    } else {
        rep.errors.push_back("scenario: missing 'initial' object");
    }

    if (j.contains("trajectory") && j.at("trajectory").is_object()) {
        cfg.trajectory = trajectory_from_json(j.at("trajectory"), cfg.initial.position, rep);
    } else {
        rep.errors.push_back("scenario: missing 'trajectory' object");
    }

    cfg.duration = get_num(j, "duration_s", rep, ctx, cfg.duration, true);
    cfg.physics_dt = get_num(j, "physics_dt_s", rep, ctx, cfg.physics_dt, false);
    cfg.seed = static_cast<std::uint64_t>(get_num(j, "seed", rep, ctx, 1.0, false));
    cfg.ground = get_bool(j, "ground", rep, ctx, false);
    cfg.log_decimation =
        static_cast<int>(get_num(j, "log_decimation", rep, ctx, 10.0, false));
    cfg.metrics_window_start =
        get_num(j, "metrics_window_start_s", rep, ctx, -1.0, false);
    cfg.settle_threshold = get_num(j, "settle_threshold_m", rep, ctx, 0.1, false);
    if (j.contains("divergence")) {
        const json& d = j.at("divergence");
        cfg.divergence.max_position_error =
            get_num(d, "max_position_error_m", rep, "divergence", 10.0, false);
        cfg.divergence.ground_impact_speed =
            get_num(d, "ground_impact_speed_mps", rep, "divergence", 0.5, false);
    }
    if (j.contains("open_loop_speeds")) {
        double speeds[6];
        if (get_vecn(j, "open_loop_speeds", rep, ctx, 6, speeds, false)) {
            std::array<double, 6> arr;
            std::copy(speeds, speeds + 6, arr.begin());
            cfg.open_loop_speeds = arr;
        }
    }
    return cfg;
}

ValidationReport validate(const AirframeConfig& cfg) {
    ValidationReport rep;
    auto positive = [&rep](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            rep.errors.push_back(std::string("airframe: ") + name + " must be positive");
        }
    };
    positive(cfg.mass, "mass_kg");
    positive(cfg.gravity, "gravity_mps2");
    positive(cfg.inertia_body.x(), "inertia_body_kgm2[0]");
    positive(cfg.inertia_body.y(), "inertia_body_kgm2[1]");
    positive(cfg.inertia_body.z(), "inertia_body_kgm2[2]");
    positive(cfg.h_top, "h_top_m");
    positive(cfg.h_bottom, "h_bottom_m");
    positive(cfg.arm_length, "arm_length_m");
    positive(cfg.c_lift, "c_lift");
    positive(cfg.c_drag, "c_drag");
    positive(cfg.omega_max, "omega_max_radps");
    positive(cfg.inertia_frame.x(), "inertia_frame_kgm2[0]");
    positive(cfg.inertia_frame.y(), "inertia_frame_kgm2[1]");
    if (!(cfg.tilt_limit > 0.0) || cfg.tilt_limit > deg2rad(45.0)) {
        rep.errors.push_back("airframe: tilt_limit_deg must lie in (0, 45]");
    }
    if (cfg.frame_damping < 0.0) {
        rep.errors.push_back("airframe: frame_damping_nms must be nonnegative");
    }
    if (std::abs(cfg.spin_direction_top) != 1 || std::abs(cfg.spin_direction_bottom) != 1) {
        rep.errors.push_back("airframe: spin directions must be +1 or -1");
    }

    for (Frame frame : {Frame::Top, Frame::Bottom}) {
        Vec3 sum = Vec3::Zero();
        for (const Vec3& r : cfg.rotor_positions(frame)) {
            sum += r;
            if (std::abs(r.norm() - cfg.arm_length) > 1e-9 * cfg.arm_length) {
                rep.errors.push_back("airframe: rotor position norm differs from arm length");
            }
        }
        if (sum.norm() > 1e-9 * cfg.arm_length) {
            rep.warnings.push_back(
                frame == Frame::Top
                    ? "airframe: top rotor positions do not sum to zero"
                    : "airframe: bottom rotor positions do not sum to zero "
                      "(unbalanced frame; hover carries a residual moment)");
        }
    }
    return rep;
}

ValidationReport validate(const ControllerConfig& cfg) {
    ValidationReport rep;
    if (!(cfg.rate_inner_hz > 0.0)) {
        rep.errors.push_back("controller: rate_inner_hz must be positive");
    }
    if (!(cfg.rate_outer_hz > 0.0)) {
        rep.errors.push_back("controller: rate_outer_hz must be positive");
    }
    if (cfg.rate_inner_hz < cfg.rate_outer_hz) {
        rep.errors.push_back("controller: rate_inner_hz must be >= rate_outer_hz");
    }

    const PidGains* all[] = {
        &cfg.gains.pos_x, &cfg.gains.pos_y, &cfg.gains.pos_z,
        &cfg.gains.vel_x, &cfg.gains.vel_y, &cfg.gains.vel_z,
        &cfg.gains.att_roll, &cfg.gains.att_pitch, &cfg.gains.att_yaw,
        &cfg.gains.rate_roll, &cfg.gains.rate_pitch, &cfg.gains.rate_yaw,
        &cfg.gains.frame_att_roll, &cfg.gains.frame_att_pitch,
        &cfg.gains.frame_rate_roll, &cfg.gains.frame_rate_pitch};
    const char* names[] = {"pos_x", "pos_y", "pos_z", "vel_x", "vel_y", "vel_z",
                           "att_roll", "att_pitch", "att_yaw",
                           "rate_roll", "rate_pitch", "rate_yaw",
                           "frame_att_roll", "frame_att_pitch",
                           "frame_rate_roll", "frame_rate_pitch"};
    for (size_t i = 0; i < std::size(all); ++i) {
        const PidGains& g = *all[i];
        if (g.kp < 0.0 || g.ki < 0.0 || g.kd < 0.0) {
            rep.errors.push_back(std::string("controller.gains.") + names[i] +
                                 ": gains must be nonnegative");
        }
        if (!(g.integral_limit > 0.0) || !(g.output_limit > 0.0)) {
            rep.errors.push_back(std::string("controller.gains.") + names[i] +
                                 ": limits must be positive");
        }
    }
    if (!(cfg.allocation.k > 0.0)) {
        rep.errors.push_back("controller.allocation: k must be positive");
    }
    if (cfg.noise.enabled) {
        const double sigmas[] = {cfg.noise.position_sigma, cfg.noise.velocity_sigma,
                                 cfg.noise.attitude_sigma, cfg.noise.rate_sigma,
                                 cfg.noise.frame_tilt_sigma, cfg.noise.frame_rate_sigma};
        for (double s : sigmas) {
            if (s < 0.0 || !std::isfinite(s)) {
                rep.errors.push_back("controller.measurement_noise: sigmas must be >= 0");
                break;
            }
        }
    }
    return rep;
}

ValidationReport validate(const ScenarioConfig& cfg) {
    ValidationReport rep;
    rep.merge(validate(cfg.airframe));
    rep.merge(validate(cfg.controller));

    if (!(cfg.duration > 0.0)) {
        rep.errors.push_back("scenario: duration_s must be positive");
    }
    if (!(cfg.physics_dt > 0.0) || cfg.physics_dt > 0.01) {
        rep.errors.push_back("scenario: physics_dt_s must lie in (0, 0.01]");
    }
    if (cfg.log_decimation < 1) {
        rep.errors.push_back("scenario: log_decimation must be >= 1");
    }
    if (cfg.metrics_window_start >= cfg.duration) {
        rep.errors.push_back("scenario: metrics_window_start_s must precede the end");
    }
    if (!(cfg.settle_threshold > 0.0)) {
        rep.errors.push_back("scenario: settle_threshold_m must be positive");
    }
    if (!(cfg.divergence.max_position_error > 0.0)) {
        rep.errors.push_back("divergence: max_position_error_m must be positive");
    }
    if (cfg.divergence.ground_impact_speed < 0.0) {
        rep.errors.push_back("divergence: ground_impact_speed_mps must be >= 0");
    }

    auto check_finite_vec = [&rep](const Vec3& v, const char* name) {
        if (!v.allFinite()) {
            rep.errors.push_back(std::string("scenario: ") + name + " must be finite");
        }
    };
    check_finite_vec(cfg.initial.position, "initial.position");
    check_finite_vec(cfg.initial.velocity, "initial.velocity");
    if (!cfg.initial.attitude.finite()) {
        rep.errors.push_back("scenario: initial.attitude_deg must be finite");
    }

    switch (cfg.trajectory.type) {
        case TrajectoryType::Circle:
            if (!(cfg.trajectory.circle.radius > 0.0)) {
                rep.errors.push_back("trajectory: radius_m must be positive");
            }
            if (!(cfg.trajectory.circle.period > 0.0)) {
                rep.errors.push_back("trajectory: period_s must be positive");
            }
            check_finite_vec(cfg.trajectory.circle.center, "trajectory.center");
            break;
        case TrajectoryType::Hover:
        case TrajectoryType::StepTest:
            check_finite_vec(cfg.trajectory.hover_position, "trajectory.position");
            if (cfg.trajectory.type == TrajectoryType::StepTest &&
                !std::isfinite(cfg.trajectory.step.magnitude)) {
                rep.errors.push_back("trajectory: step magnitude must be finite");
            }
            break;
        case TrajectoryType::SetpointSequence:
            if (cfg.trajectory.sequence.empty()) {
                rep.errors.push_back("trajectory: setpoint sequence is empty");
            }
            break;
    }

    if (cfg.open_loop_speeds) {
        for (double w : *cfg.open_loop_speeds) {
            if (!(w >= 0.0) || w > cfg.airframe.omega_max) {
                rep.errors.push_back(
                    "scenario: open_loop_speeds must lie in [0, omega_max_radps]");
                break;
            }
        }
    }
    return rep;
}

void apply_override(json& doc, const std::string& assignment) {
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override must look like key.path=value: " + assignment);
    }
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;  // bare string
    }

    json* node = &doc;
    size_t begin = 0;
    while (true) {
        const size_t dot = key.find('.', begin);
        const std::string part = key.substr(begin, dot - begin);
        if (part.empty()) {
            throw ConfigError("override has an empty path segment: " + assignment);
        }
        if (dot == std::string::npos) {
            (*node)[part] = parsed;
            break;
        }
        if (!node->contains(part) || !(*node)[part].is_object()) {
            (*node)[part] = json::object();
        }
        node = &(*node)[part];
        begin = dot + 1;
    }
}

namespace {

LoadedScenario load_scenario_impl(const std::string& path,
                                  const std::vector<std::string>& overrides,
                                  bool throw_on_invalid) {
    json doc = load_json_file(path);
    if (!doc.is_object()) {
        throw ConfigError(path + ": scenario document must be a JSON object");
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    // Inline referenced config files so overrides hit one merged document.
    for (const char* key : {"airframe", "controller"}) {
        if (doc.contains(key) && doc.at(key).is_string()) {
            const std::filesystem::path ref =
                base / doc.at(key).get<std::string>();
            doc[key] = load_json_file(ref.string());
        }
    }
    if (!doc.contains("name")) {
        doc["name"] = std::filesystem::path(path).stem().string();
    }

    for (const std::string& assignment : overrides) {
        apply_override(doc, assignment);
    }

    LoadedScenario loaded;
    loaded.merged = doc;
    loaded.config = scenario_from_json(doc, loaded.report);
    if (loaded.report.ok()) {
        loaded.report.merge(validate(loaded.config));
    }
    if (throw_on_invalid && !loaded.report.ok()) {
        throw ConfigError(path + ":\n" + loaded.report.str());
    }
    return loaded;
}

}  // namespace

LoadedScenario load_scenario(const std::string& path,
                             const std::vector<std::string>& overrides) {
    return load_scenario_impl(path, overrides, true);
}

LoadedScenario inspect_scenario(const std::string& path,
                                const std::vector<std::string>& overrides) {
    return load_scenario_impl(path, overrides, false);
}

json metrics_to_json(const RunResult& result) {
    json j;
    j["status"] = result.status == RunStatus::Completed ? "completed" : "diverged";
    if (result.status == RunStatus::Diverged) {
        j["divergence_reason"] = result.divergence_reason;
    }
    j["end_time_s"] = result.end_time;
    j["rms_position_error_m"] = result.metrics.rms_position_error;
    j["max_position_error_m"] = result.metrics.max_position_error;
    j["rms_attitude_error_rad"] = result.metrics.rms_attitude_error;
    j["max_attitude_error_rad"] = result.metrics.max_attitude_error;
    if (result.metrics.settling_time >= 0.0) {
        j["settling_time_s"] = result.metrics.settling_time;
    } else {
        j["settling_time_s"] = nullptr;  // never settled
    }
    j["saturation_fraction"] = result.metrics.saturation_fraction;
    return j;
}

}  // namespace hexsim
