#include "hexsim/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace hexsim {

std::array<double, VehicleState::kDim> VehicleState::pack() const {
    return {position.x(), position.y(), position.z(),
            velocity.x(), velocity.y(), velocity.z(),
            attitude.roll, attitude.pitch, attitude.yaw,
            body_rates.x(), body_rates.y(), body_rates.z(),
            top_tilt.x(), top_tilt.y(), top_tilt_rate.x(), top_tilt_rate.y(),
            bottom_tilt.x(), bottom_tilt.y(), bottom_tilt_rate.x(), bottom_tilt_rate.y()};
}

VehicleState VehicleState::unpack(const std::array<double, kDim>& x) {
    VehicleState s;
    s.position = {x[0], x[1], x[2]};
    s.velocity = {x[3], x[4], x[5]};
    s.attitude = {x[6], x[7], x[8]};
    s.body_rates = {x[9], x[10], x[11]};
    s.top_tilt = {x[12], x[13]};
    s.top_tilt_rate = {x[14], x[15]};
    s.bottom_tilt = {x[16], x[17]};
    s.bottom_tilt_rate = {x[18], x[19]};
    return s;
}

bool VehicleState::finite() const {
    for (double v : pack()) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

std::array<double, VehicleState::kDim> StateDerivative::pack() const {
    return {position_dot.x(), position_dot.y(), position_dot.z(),
            velocity_dot.x(), velocity_dot.y(), velocity_dot.z(),
            attitude_dot.roll, attitude_dot.pitch, attitude_dot.yaw,
            body_rates_dot.x(), body_rates_dot.y(), body_rates_dot.z(),
            top_tilt_dot.x(), top_tilt_dot.y(),
            top_tilt_rate_dot.x(), top_tilt_rate_dot.y(),
            bottom_tilt_dot.x(), bottom_tilt_dot.y(),
            bottom_tilt_rate_dot.x(), bottom_tilt_rate_dot.y()};
}

Vec3 body_rotational_accel(const Vec3& body_rates, const Vec3& moment,
                           const AirframeConfig& cfg) {
    const Vec3 i_omega = cfg.inertia_body.cwiseProduct(body_rates);
    const Vec3 rhs = -body_rates.cross(i_omega) + moment;
    return rhs.cwiseQuotient(cfg.inertia_body);
}

Vec3 body_translational_accel(const Vec3& world_force, const AirframeConfig& cfg) {
    return world_force / cfg.mass;
}

Vec2 frame_tilt_accel(const Vec2& tilt, const Vec2& tilt_rate,
                      const Vec2& moment_xy, const Vec2& body_coupling,
                      const AirframeConfig& cfg) {
    Vec2 accel = (moment_xy - cfg.frame_damping * tilt_rate).cwiseQuotient(cfg.inertia_frame) +
                 body_coupling;
    for (int axis = 0; axis < 2; ++axis) {
        if (tilt(axis) >= cfg.tilt_limit && accel(axis) > 0.0) {
            accel(axis) = 0.0;
        } else if (tilt(axis) <= -cfg.tilt_limit && accel(axis) < 0.0) {
            accel(axis) = 0.0;
        }
    }
    return accel;
}

StateDerivative state_derivative(const VehicleState& state, const RotorSpeeds& speeds,
                                 const AirframeConfig& cfg) {
    const FrameWrench top = frame_wrench(state.top_tilt, speeds.top(), cfg, Frame::Top);
    const FrameWrench bottom =
        frame_wrench(state.bottom_tilt, speeds.bottom(), cfg, Frame::Bottom);

    Vec3 moment = body_moment(top, bottom, cfg);
    // Reaction of the joint damping torque onto the body (opposite sign of
    // the torque applied to each frame).
    moment.x() += cfg.frame_damping * (state.top_tilt_rate.x() + state.bottom_tilt_rate.x());
    moment.y() += cfg.frame_damping * (state.top_tilt_rate.y() + state.bottom_tilt_rate.y());

    const Vec3 world_force = body_force_world(state.attitude, top.force, bottom.force, cfg);

    StateDerivative d;
    d.position_dot = state.velocity;
    d.velocity_dot = body_translational_accel(world_force, cfg);
    const Vec3 euler_rates = euler_rate_matrix(state.attitude) * state.body_rates;
    d.attitude_dot = {euler_rates.x(), euler_rates.y(), euler_rates.z()};
    d.body_rates_dot = body_rotational_accel(state.body_rates, moment, cfg);

    d.top_tilt_dot = state.top_tilt_rate;
    d.top_tilt_rate_dot = frame_tilt_accel(state.top_tilt, state.top_tilt_rate,
                                           top.moment.head<2>(), Vec2::Zero(), cfg);
    d.bottom_tilt_dot = state.bottom_tilt_rate;
    d.bottom_tilt_rate_dot = frame_tilt_accel(state.bottom_tilt, state.bottom_tilt_rate,
                                              bottom.moment.head<2>(), Vec2::Zero(), cfg);
    return d;
}

namespace {

void apply_tilt_stop(Vec2& tilt, Vec2& rate, double limit) {
    for (int axis = 0; axis < 2; ++axis) {
        if (tilt(axis) > limit) {
            tilt(axis) = limit;
            rate(axis) = std::min(rate(axis), 0.0);
        } else if (tilt(axis) < -limit) {
            tilt(axis) = -limit;
            rate(axis) = std::max(rate(axis), 0.0);
        } else if (tilt(axis) == limit) {
            rate(axis) = std::min(rate(axis), 0.0);
        } else if (tilt(axis) == -limit) {
            rate(axis) = std::max(rate(axis), 0.0);
        }
    }
}

}  // namespace

VehicleState step(const VehicleState& state, const RotorSpeeds& speeds, double dt,
                  const AirframeConfig& cfg) {
    if (!(dt > 0.0) || dt > 0.01) {
        throw std::invalid_argument("step dt must lie in (0, 0.01] s");
    }

    using Packed = std::array<double, VehicleState::kDim>;
    const Packed x0 = state.pack();

    auto eval = [&](const Packed& base, const Packed& k, double scale) {
        Packed x = base;
        for (int i = 0; i < VehicleState::kDim; ++i) {
            x[i] += scale * k[i];
        }
        return state_derivative(VehicleState::unpack(x), speeds, cfg).pack();
    };

    const Packed zero{};
    const Packed k1 = eval(x0, zero, 0.0);
    const Packed k2 = eval(x0, k1, dt / 2.0);
    const Packed k3 = eval(x0, k2, dt / 2.0);
    const Packed k4 = eval(x0, k3, dt);

    Packed x1;
    for (int i = 0; i < VehicleState::kDim; ++i) {
        x1[i] = x0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    VehicleState next = VehicleState::unpack(x1);
    apply_tilt_stop(next.top_tilt, next.top_tilt_rate, cfg.tilt_limit);
    apply_tilt_stop(next.bottom_tilt, next.bottom_tilt_rate, cfg.tilt_limit);

    if (!next.finite()) {
        throw NonFiniteState();
    }
    return next;
}

VehicleState hover_state(const Vec3& position) {
    VehicleState s;
    s.position = position;
    return s;
}

RotorSpeeds hover_speeds(const AirframeConfig& cfg) {
    RotorSpeeds s;
    s.omega.fill(cfg.hover_rotor_speed());
    return s;
}

double rotational_energy(const VehicleState& state, const AirframeConfig& cfg) {
    return 0.5 * state.body_rates.dot(cfg.inertia_body.cwiseProduct(state.body_rates));
}

}  // namespace hexsim
