#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "hexsim/config_io.hpp"
#include "hexsim/csv_log.hpp"
#include "hexsim/sim.hpp"
#include "hexsim/svg_plot.hpp"

using namespace hexsim;

namespace {

ScenarioConfig shipped(const std::string& name) {
    return load_scenario(std::string(HEXSIM_SCENARIO_DIR) + "/" + name).config;
}

SimLog synthetic_log(int n, double dt,
                     const std::function<void(int, std::vector<double>&, int, int)>& fill) {
    SimLog log;
    log.columns = log_columns();
    const int it = log.column_index("t");
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(log.columns.size(), 0.0);
        row[static_cast<size_t>(it)] = i * dt;
        fill(i, row, log.column_index("px"), log.column_index("sp_px"));
        log.rows.push_back(row);
    }
    return log;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("circle reference follows the parametrization") {
    CircleSpec spec;
    spec.center = Vec3{2.3, 3.5, 1.5};
    spec.radius = 1.0;
    spec.period = 10.0;
    spec.altitude = 1.5;

    const Setpoint at0 = circle_reference(0.0, spec);
    CHECK(at0.position.x() == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(at0.position.y() == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(at0.position.z() == doctest::Approx(1.5).epsilon(1e-12));

    const Setpoint at5 = circle_reference(5.0, spec);
    CHECK(at5.position.x() == doctest::Approx(3.3).epsilon(1e-12));
    CHECK(at5.position.y() == doctest::Approx(3.5).epsilon(1e-9));

    for (double t : {0.0, 1.7, 4.2, 9.9}) {
        CHECK(circle_reference(t, spec).velocity_ff.norm() ==
              doctest::Approx(kPi / 5.0).epsilon(1e-12));
    }
}

TEST_CASE("metrics on synthetic logs") {
    // perfect tracking
    SimLog perfect = synthetic_log(101, 0.1, [](int, std::vector<double>&, int, int) {});
    TrackingMetrics m = compute_metrics(perfect, 0.0);
    CHECK(m.rms_position_error == 0.0);
    CHECK(m.max_position_error == 0.0);
    CHECK(m.rms_attitude_error == 0.0);
    CHECK(m.settling_time == 0.0);

    // constant 0.1 m x offset
    SimLog offset = synthetic_log(101, 0.1, [](int, std::vector<double>& row, int ipx, int) {
        row[static_cast<size_t>(ipx)] = 0.1;
    });
    m = compute_metrics(offset, 0.0);
    CHECK(m.rms_position_error == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(m.max_position_error == doctest::Approx(0.1).epsilon(1e-12));

    // sinusoidal error of amplitude a: rms = a / sqrt(2)
    const double a = 0.25;
    SimLog sine = synthetic_log(10000, 0.001,
                                [a](int i, std::vector<double>& row, int ipx, int) {
                                    row[static_cast<size_t>(ipx)] =
                                        a * std::sin(2 * kPi * i / 1000.0);
                                });
    m = compute_metrics(sine, 0.0);
    CHECK(std::abs(m.rms_position_error - a / std::sqrt(2.0)) / (a / std::sqrt(2.0)) < 0.01);

    CHECK_THROWS_AS((void)compute_metrics(perfect, 1e6), EmptyWindow);
}

TEST_CASE("hover scenario holds position") {
    const RunResult r = run_scenario(shipped("hover.json"));
    CHECK(r.status == RunStatus::Completed);
    CHECK(r.metrics.rms_position_error < 1e-4);
    CHECK(r.metrics.saturation_fraction == 0.0);
}

TEST_CASE("runs are deterministic") {
    const ScenarioConfig cfg = shipped("step_x.json");
    const RunResult a = run_scenario(cfg);
    const RunResult b = run_scenario(cfg);
    REQUIRE(a.log.rows.size() == b.log.rows.size());
    CHECK(a.log.rows == b.log.rows);  // exact doubles, quantized identically
}

TEST_CASE("zero-thrust open-loop run diverges on ground impact") {
    ScenarioConfig cfg = shipped("hover.json");
    cfg.open_loop_speeds = std::array<double, 6>{};
    cfg.ground = true;
    const RunResult r = run_scenario(cfg);
    CHECK(r.status == RunStatus::Diverged);
    CHECK(r.divergence_reason == "ground impact");
    CHECK(r.end_time < 1.0);
    CHECK_FALSE(r.log.empty());  // partial log
}

TEST_CASE("unbounded position error diverges") {
    ScenarioConfig cfg = shipped("hover.json");
    cfg.open_loop_speeds = std::array<double, 6>{};  // free fall, no ground plane
    cfg.divergence.max_position_error = 5.0;
    const RunResult r = run_scenario(cfg);
    CHECK(r.status == RunStatus::Diverged);
    CHECK(r.divergence_reason == "position error exceeded bound");
}

TEST_CASE("open-loop hover speeds keep the equilibrium") {
    ScenarioConfig cfg = shipped("hover.json");
    AirframeConfig air = cfg.airframe;
    std::array<double, 6> speeds;
    speeds.fill(air.hover_rotor_speed());
    cfg.open_loop_speeds = speeds;
    const RunResult r = run_scenario(cfg);
    CHECK(r.status == RunStatus::Completed);
    CHECK(r.metrics.max_position_error < 1e-6);
}

TEST_CASE("controller rate contract: diagnostics hold between controller ticks") {
    ScenarioConfig cfg = shipped("step_x.json");
    cfg.physics_dt = 5e-4;  // two physics ticks per 1 kHz controller tick
    cfg.duration = 2.0;
    cfg.log_decimation = 1;
    const RunResult r = run_scenario(cfg);
    REQUIRE(r.status == RunStatus::Completed);

    const int iu = r.log.column_index("u_1");
    const int iv = r.log.column_index("vel_ref_x");
    REQUIRE(iu >= 0);
    for (size_t i = 0; i + 1 < r.log.rows.size(); i += 2) {
        // rows 0/1, 2/3, ... share one controller tick
        CHECK(r.log.rows[i][static_cast<size_t>(iu)] ==
              r.log.rows[i + 1][static_cast<size_t>(iu)]);
        CHECK(r.log.rows[i][static_cast<size_t>(iv)] ==
              r.log.rows[i + 1][static_cast<size_t>(iv)]);
    }
}

TEST_CASE("log integrity: actuators clamped, tilts inside the stop") {
    const ScenarioConfig cfg = shipped("circle_paper.json");
    const RunResult r = run_scenario(cfg);
    REQUIRE(r.status == RunStatus::Completed);

    const int iu = r.log.column_index("u_1");
    const int itilt = r.log.column_index("top_tilt_roll");
    const double limit = cfg.airframe.tilt_limit + 1e-12;
    for (const auto& row : r.log.rows) {
        for (int m = 0; m < 6; ++m) {
            const double u = row[static_cast<size_t>(iu + m)];
            CHECK(u >= 0.0);
            CHECK(u <= 1.0);
        }
        for (int k = 0; k < 8; ++k) {
            if (k == 2 || k == 3 || k == 6 || k == 7) {
                continue;  // rate columns
            }
            CHECK(std::abs(row[static_cast<size_t>(itilt + k)]) <= limit);
        }
    }
}

TEST_CASE("csv roundtrip reproduces rows and metrics exactly") {
    ScenarioConfig cfg = shipped("hover.json");
    cfg.duration = 2.0;
    const RunResult r = run_scenario(cfg);

    const std::string path = (std::filesystem::temp_directory_path() /
                              "hexsim_roundtrip_test.csv").string();
    write_csv(r.log, path);
    const SimLog back = read_csv(path);
    CHECK(back.columns == r.log.columns);
    REQUIRE(back.rows.size() == r.log.rows.size());
    CHECK(back.rows == r.log.rows);

    const TrackingMetrics m1 = compute_metrics(r.log, 1.0);
    const TrackingMetrics m2 = compute_metrics(back, 1.0);
    CHECK(m1.rms_position_error == m2.rms_position_error);
    CHECK(m1.max_position_error == m2.max_position_error);
    CHECK(m1.rms_attitude_error == m2.rms_attitude_error);
    CHECK(m1.settling_time == m2.settling_time);
    std::filesystem::remove(path);
}

TEST_CASE("decoupling test with zero magnitude shows no excursions") {
    ScenarioConfig base = shipped("step_x.json");
    base.duration = 3.0;
    const DecouplingResult r = decoupling_test(StepAxis::X, 0.0, StepAxis::Pitch, 0.0, base);
    CHECK(r.max_attitude_excursion < 1e-9);
    CHECK(r.max_position_excursion < 1e-9);
}

TEST_CASE("svg plots render from a log") {
    ScenarioConfig cfg = shipped("hover.json");
    cfg.duration = 1.0;
    cfg.initial.attitude = {deg2rad(1.0), deg2rad(-1.0), 0.0};
    const RunResult r = run_scenario(cfg);

    const auto dir = std::filesystem::temp_directory_path();
    const std::string traj = (dir / "hexsim_test_traj.svg").string();
    const std::string att = (dir / "hexsim_test_att.svg").string();
    write_trajectory_svg(r.log, traj);
    write_attitude_svg(r.log, att);

    const std::string traj_text = slurp(traj);
    CHECK(traj_text.find("<svg") != std::string::npos);
    CHECK(traj_text.find("<polyline") != std::string::npos);

    const std::string att_text = slurp(att);
    CHECK(att_text.find("<polyline") != std::string::npos);
    // the y range covers the initial +1/-1 degree attitude
    CHECK(att_text.find("roll") != std::string::npos);

    SimLog empty;
    empty.columns = log_columns();
    CHECK_THROWS(write_trajectory_svg(empty, traj));

    std::filesystem::remove(traj);
    std::filesystem::remove(att);
}

TEST_CASE("quantization matches the csv formatter") {
    for (double v : {0.1234567890123, -9.87654321e-7, 1234567.891, 0.0, -0.0}) {
        CHECK(quantize_csv(v) == std::strtod(format_csv_value(v).c_str(), nullptr));
    }
}

TEST_CASE("setpoint sequence holds the most recent point") {
    TrajectorySpec traj;
    traj.type = TrajectoryType::SetpointSequence;
    traj.sequence = {{0.0, Vec3{0, 0, 1}, {}},
                     {2.0, Vec3{1, 0, 1}, {0.0, 0.0, deg2rad(45.0)}}};

    CHECK(trajectory_setpoint(0.5, traj).position.x() == 0.0);
    const Setpoint late = trajectory_setpoint(3.0, traj);
    CHECK(late.position.x() == 1.0);
    CHECK(late.attitude.yaw == doctest::Approx(deg2rad(45.0)));
}

TEST_CASE("measurement noise is seeded and deterministic") {
    ScenarioConfig cfg = shipped("hover.json");
    cfg.duration = 3.0;
    cfg.controller.noise.enabled = true;
    cfg.controller.noise.position_sigma = 0.005;
    cfg.controller.noise.attitude_sigma = 0.002;
    cfg.seed = 42;

    const RunResult a = run_scenario(cfg);
    const RunResult b = run_scenario(cfg);
    REQUIRE(a.status == RunStatus::Completed);
    CHECK(a.log.rows == b.log.rows);

    cfg.seed = 43;
    const RunResult c = run_scenario(cfg);
    CHECK(a.log.rows != c.log.rows);

    // the loop still holds position despite the noise
    CHECK(a.metrics.rms_position_error < 0.05);
}
