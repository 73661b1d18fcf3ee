#include <doctest.h>

#include <cmath>
#include <random>

#include "hexsim/dynamics.hpp"

using namespace hexsim;

namespace {
const AirframeConfig kDefault{};

VehicleState spin_state(const Vec3& omega) {
    VehicleState s;
    s.position = Vec3{0, 0, 10.0};
    s.body_rates = omega;
    return s;
}

RotorSpeeds zero_speeds() {
    return RotorSpeeds{};
}

}  // namespace

TEST_CASE("rotational acceleration") {
    CHECK(body_rotational_accel(Vec3::Zero(), Vec3::Zero(), kDefault).norm() == 0.0);

    const Vec3 a = body_rotational_accel(Vec3::Zero(), Vec3{0.012, 0, 0}, kDefault);
    CHECK(a.x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.y() == 0.0);
    CHECK(a.z() == 0.0);
}

TEST_CASE("translational acceleration") {
    CHECK(body_translational_accel(Vec3::Zero(), kDefault).norm() == 0.0);
    CHECK(body_translational_accel(Vec3{0.8, 0, 0}, kDefault).x() == doctest::Approx(1.0));
    const Vec3 ff = body_translational_accel(Vec3{0, 0, -kDefault.mass * kDefault.gravity},
                                             kDefault);
    CHECK(ff.z() == doctest::Approx(-9.8));
}

TEST_CASE("frame tilt acceleration and hard stop semantics") {
    CHECK(frame_tilt_accel(Vec2::Zero(), Vec2::Zero(), Vec2::Zero(), Vec2::Zero(), kDefault)
              .norm() == 0.0);

    // outward-pushing moment at the stop produces no acceleration
    const Vec2 at_stop{kDefault.tilt_limit, 0.0};
    const Vec2 accel =
        frame_tilt_accel(at_stop, Vec2::Zero(), Vec2{0.05, 0.0}, Vec2::Zero(), kDefault);
    CHECK(accel(0) == 0.0);
    // inward moment releases
    const Vec2 in =
        frame_tilt_accel(at_stop, Vec2::Zero(), Vec2{-0.05, 0.0}, Vec2::Zero(), kDefault);
    CHECK(in(0) < 0.0);
}

TEST_CASE("frame tilt double integrator closed form") {
    AirframeConfig cfg = kDefault;
    cfg.frame_damping = 0.0;
    const double torque = 0.001;
    const double dt = 1e-4;
    const double duration = 0.5;

    Vec2 tilt = Vec2::Zero();
    Vec2 rate = Vec2::Zero();
    const long n = std::lround(duration / dt);
    for (long i = 0; i < n; ++i) {
        // RK4 on the pure double integrator with constant moment
        auto accel = [&](const Vec2& th, const Vec2& w) {
            return frame_tilt_accel(th, w, Vec2{torque, 0.0}, Vec2::Zero(), cfg);
        };
        const Vec2 k1t = rate, k1w = accel(tilt, rate);
        const Vec2 k2t = rate + dt / 2 * k1w, k2w = accel(tilt + dt / 2 * k1t, rate + dt / 2 * k1w);
        const Vec2 k3t = rate + dt / 2 * k2w, k3w = accel(tilt + dt / 2 * k2t, rate + dt / 2 * k2w);
        const Vec2 k4t = rate + dt * k3w, k4w = accel(tilt + dt * k3t, rate + dt * k3w);
        tilt += dt / 6 * (k1t + 2 * k2t + 2 * k3t + k4t);
        rate += dt / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
    }
    const double expected = 0.5 * (torque / cfg.inertia_frame(0)) * duration * duration;
    CHECK(std::abs(tilt(0) - expected) < 1e-6);
    CHECK(tilt(1) == 0.0);
}

TEST_CASE("state derivative at the hover fixed point is zero") {
    const VehicleState hover = hover_state(Vec3{1, 2, 3});
    const StateDerivative d = state_derivative(hover, hover_speeds(kDefault), kDefault);
    for (double v : d.pack()) {
        CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("top-frame differential drives tilt but not the body at t=0") {
    const VehicleState hover = hover_state(Vec3::Zero());
    RotorSpeeds speeds = hover_speeds(kDefault);
    // Perturb rotors 1 and 3 with the sum of squares held, so frame thrust
    // and drag totals stay at hover values.
    const double w2 = speeds.omega[0] * speeds.omega[0];
    const double delta = 0.1 * w2;
    speeds.omega[0] = std::sqrt(w2 + delta);
    speeds.omega[2] = std::sqrt(w2 - delta);

    const StateDerivative d = state_derivative(hover, speeds, kDefault);
    CHECK(d.velocity_dot.norm() < 1e-12);
    CHECK(d.body_rates_dot.norm() < 1e-12);
    CHECK(d.top_tilt_rate_dot.norm() > 1e-3);
    CHECK(d.bottom_tilt_rate_dot.norm() < 1e-12);
}

TEST_CASE("all-zero speeds give pure gravity") {
    VehicleState s;
    s.position = Vec3{0, 0, 5};
    s.attitude = {0.3, -0.2, 1.0};
    const StateDerivative d = state_derivative(s, zero_speeds(), kDefault);
    CHECK(d.velocity_dot.x() == 0.0);
    CHECK(d.velocity_dot.y() == 0.0);
    CHECK(d.velocity_dot.z() == doctest::Approx(-9.8));
}

TEST_CASE("step validates dt") {
    const VehicleState hover = hover_state(Vec3::Zero());
    CHECK_THROWS_AS((void)step(hover, hover_speeds(kDefault), 0.0, kDefault),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)step(hover, hover_speeds(kDefault), 0.02, kDefault),
                    std::invalid_argument);
}

TEST_CASE("hover equilibrium is preserved over 10 seconds") {
    VehicleState s = hover_state(Vec3{0, 0, 1.5});
    const RotorSpeeds speeds = hover_speeds(kDefault);
    for (int i = 0; i < 10000; ++i) {
        s = step(s, speeds, 1e-3, kDefault);
    }
    CHECK((s.position - Vec3{0, 0, 1.5}).norm() < 1e-6);
    CHECK(std::abs(s.attitude.roll) < 1e-6);
    CHECK(std::abs(s.attitude.pitch) < 1e-6);
    CHECK(std::abs(s.attitude.yaw) < 1e-6);
}

TEST_CASE("free fall matches the ballistic closed form") {
    VehicleState s;
    s.position = Vec3{0, 0, 10.0};
    for (int i = 0; i < 1000; ++i) {
        s = step(s, zero_speeds(), 1e-3, kDefault);
    }
    CHECK(std::abs(s.position.z() - (10.0 - 4.9)) < 1e-6);
    CHECK(std::abs(s.velocity.z() + 9.8) < 1e-9);
}

TEST_CASE("torque-free spin conserves rotational kinetic energy") {
    VehicleState s = spin_state(Vec3{0.4, 0.3, 6.0});
    const double e0 = rotational_energy(s, kDefault);
    for (int i = 0; i < 1000; ++i) {
        s = step(s, zero_speeds(), 1e-3, kDefault);
    }
    CHECK(std::abs(rotational_energy(s, kDefault) - e0) / e0 < 1e-8);
}

TEST_CASE("RK4 shows fourth-order convergence on a torque-free spin") {
    const Vec3 omega0{0.4, 0.3, 6.0};

    auto integrate = [&](double dt) {
        VehicleState s = spin_state(omega0);
        const long n = std::lround(1.0 / dt);
        for (long i = 0; i < n; ++i) {
            s = step(s, zero_speeds(), dt, kDefault);
        }
        return s.body_rates;
    };

    const Vec3 reference = integrate(1e-4);
    const double e1 = (integrate(8e-3) - reference).norm();
    const double e2 = (integrate(4e-3) - reference).norm();
    const double e3 = (integrate(2e-3) - reference).norm();

    const double order12 = std::log2(e1 / e2);
    const double order23 = std::log2(e2 / e3);
    CHECK(order12 >= 3.8);
    CHECK(order23 >= 3.8);
}

TEST_CASE("tilt stops clamp and zero the outward rate") {
    // Strong thrust asymmetry pushes the top frame onto the pitch stop. Body
    // inertia is inflated so the vehicle itself barely rotates meanwhile.
    AirframeConfig cfg = kDefault;
    cfg.inertia_body = Vec3{10.0, 10.0, 10.0};
    RotorSpeeds speeds = hover_speeds(cfg);
    speeds.omega[1] *= 1.6;  // rotor 2 at -x: pitch moment positive

    VehicleState s = hover_state(Vec3{0, 0, 5.0});
    double max_tilt = 0.0;
    for (int i = 0; i < 3000; ++i) {
        s = step(s, speeds, 1e-3, cfg);
        max_tilt = std::max(max_tilt, std::abs(s.top_tilt(1)));
    }
    CHECK(max_tilt <= cfg.tilt_limit + 1e-12);
    CHECK(s.top_tilt(1) == doctest::Approx(cfg.tilt_limit));
    CHECK(s.top_tilt_rate(1) <= 0.0);
}

TEST_CASE("non-finite states are rejected") {
    VehicleState s = hover_state(Vec3::Zero());
    s.velocity.x() = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)step(s, hover_speeds(kDefault), 1e-3, kDefault), NonFiniteState);
}

TEST_CASE("numerical jacobian of the hover derivative is step-size stable") {
    const VehicleState hover = hover_state(Vec3{0, 0, 2.0});
    const RotorSpeeds speeds = hover_speeds(kDefault);

    auto jacobian = [&](double h) {
        std::array<std::array<double, VehicleState::kDim>, VehicleState::kDim> jac{};
        const auto x0 = hover.pack();
        for (int col = 0; col < VehicleState::kDim; ++col) {
            auto xp = x0, xm = x0;
            xp[static_cast<size_t>(col)] += h;
            xm[static_cast<size_t>(col)] -= h;
            const auto fp = state_derivative(VehicleState::unpack(xp), speeds, kDefault).pack();
            const auto fm = state_derivative(VehicleState::unpack(xm), speeds, kDefault).pack();
            for (int row = 0; row < VehicleState::kDim; ++row) {
                jac[static_cast<size_t>(row)][static_cast<size_t>(col)] =
                    (fp[static_cast<size_t>(row)] - fm[static_cast<size_t>(row)]) / (2 * h);
            }
        }
        return jac;
    };

    const auto j6 = jacobian(1e-6);
    const auto j5 = jacobian(1e-5);
    double max_entry = 0.0;
    for (const auto& row : j6) {
        for (double v : row) {
            CHECK(std::isfinite(v));
            max_entry = std::max(max_entry, std::abs(v));
        }
    }
    CHECK(max_entry > 1.0);
    for (int r = 0; r < VehicleState::kDim; ++r) {
        for (int c = 0; c < VehicleState::kDim; ++c) {
            const double a = j6[static_cast<size_t>(r)][static_cast<size_t>(c)];
            const double b = j5[static_cast<size_t>(r)][static_cast<size_t>(c)];
            const double scale = std::max({std::abs(a), std::abs(b), 1e-3 * max_entry});
            CHECK(std::abs(a - b) / scale < 1e-4);
        }
    }
}
