#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hexsim/airframe.hpp"
#include "hexsim/control.hpp"
#include "hexsim/dynamics.hpp"

namespace hexsim {

inline constexpr const char* kVersion = "0.1.0";

enum class TrajectoryType { Hover, Circle, SetpointSequence, StepTest };

enum class StepAxis { X, Y, Z, Roll, Pitch, Yaw };

struct CircleSpec {
    Vec3 center{0.0, 0.0, 1.5};
    double radius = 1.0;    // m
    double period = 10.0;   // s
    double altitude = 1.5;  // m, overrides center.z
};

struct SequencePoint {
    double time = 0.0;
    Vec3 position = Vec3::Zero();
    EulerAngles attitude;
};

struct StepSpec {
    StepAxis axis = StepAxis::X;
    double magnitude = 0.5;  // m or rad
    double step_time = 1.0;  // s
};

struct TrajectorySpec {
    TrajectoryType type = TrajectoryType::Hover;
    Vec3 hover_position{0.0, 0.0, 1.5};
    CircleSpec circle;
    std::vector<SequencePoint> sequence;
    StepSpec step;
};

struct DivergenceConfig {
    double max_position_error = 10.0;   // m
    double ground_impact_speed = 0.5;   // m/s downward at contact
};

struct InitialState {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    EulerAngles attitude;

    VehicleState to_state() const;
};

struct ScenarioConfig {
    std::string name = "scenario";
    AirframeConfig airframe;
    ControllerConfig controller;
    TrajectorySpec trajectory;
    InitialState initial;
    double duration = 10.0;            // s
    double physics_dt = 1.0e-3;        // s
    std::uint64_t seed = 1;
    bool ground = false;               // z >= 0 support plane
    int log_decimation = 10;
    double metrics_window_start = -1.0;  // s; negative = last half of the run
    double settle_threshold = 0.1;       // m
    DivergenceConfig divergence;
    std::optional<std::array<double, 6>> open_loop_speeds;  // rad/s, bypasses controller
};

struct LogMetadata {
    std::string scenario_name;
    std::string version;
    std::uint64_t seed = 0;
    double physics_dt = 0.0;
    double duration = 0.0;
};

/// Column-oriented time series; column names are the CSV contract. Values
/// are stored already quantized to the 9-significant-digit CSV
/// representation so persisted and in-memory logs agree exactly.
struct SimLog {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    LogMetadata metadata;

    int column_index(const std::string& name) const;  // -1 if absent
    bool empty() const { return rows.empty(); }
};

struct TrackingMetrics {
    double rms_position_error = 0.0;   // m
    double max_position_error = 0.0;   // m
    double rms_attitude_error = 0.0;   // rad
    double max_attitude_error = 0.0;   // rad
    double settling_time = -1.0;       // s; -1 when never settled
    double saturation_fraction = 0.0;  // [0,1]
};

enum class RunStatus { Completed, Diverged };

struct RunResult {
    RunStatus status = RunStatus::Completed;
    std::string divergence_reason;
    double end_time = 0.0;
    SimLog log;
    TrackingMetrics metrics;
};

struct EmptyWindow : std::runtime_error {
    EmptyWindow() : std::runtime_error("metrics window contains no log rows") {}
};

/// Reference on the circular path: position on the circle, level attitude,
/// analytic velocity feedforward.
Setpoint circle_reference(double t, const CircleSpec& spec);

/// Reference at time t for any trajectory type.
Setpoint trajectory_setpoint(double t, const TrajectorySpec& traj);

/// The canonical column list written by run_scenario.
const std::vector<std::string>& log_columns();

/// Deterministic closed-loop rollout: physics at physics_dt, controller at
/// its configured rates with zero-order hold, rows logged every
/// log_decimation ticks.
RunResult run_scenario(const ScenarioConfig& scenario);

/// Tracking metrics over [window_start, end] of the log. Throws EmptyWindow.
TrackingMetrics compute_metrics(const SimLog& log, double window_start,
                                double settle_threshold = 0.1);

struct DecouplingResult {
    double max_attitude_excursion = 0.0;  // rad, during the position step
    double max_position_excursion = 0.0;  // m, during the attitude step
    RunResult position_run;
    RunResult attitude_run;
};

/// Position step with zero attitude reference, then attitude step at fixed
/// position; records the cross-axis excursions.
DecouplingResult decoupling_test(StepAxis position_axis, double position_magnitude,
                                 StepAxis attitude_axis, double attitude_magnitude,
                                 const ScenarioConfig& base);

/// Round a value through the 9-significant-digit CSV representation.
double quantize_csv(double value);

}  // namespace hexsim
