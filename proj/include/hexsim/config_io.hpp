#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hexsim/sim.hpp"

namespace hexsim {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Every violation found while parsing/validating a config, not just the
/// first. Warnings do not fail validation.
struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
    void merge(const ValidationReport& other);
    std::string str() const;
};

/// Parse a JSON file; ConfigError carries nlohmann's line/column message.
nlohmann::json load_json_file(const std::string& path);

AirframeConfig airframe_from_json(const nlohmann::json& j, ValidationReport& report);
ControllerConfig controller_from_json(const nlohmann::json& j, ValidationReport& report);
ScenarioConfig scenario_from_json(const nlohmann::json& j, ValidationReport& report);

ValidationReport validate(const AirframeConfig& cfg);
ValidationReport validate(const ControllerConfig& cfg);
ValidationReport validate(const ScenarioConfig& cfg);

/// Apply one dotted-key override ("controller.gains.pos_x.kp=2.0") to a
/// merged scenario document. Values parse as JSON first, bare strings second.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Read a scenario file, inline any airframe/controller path references
/// (relative to the scenario file), apply overrides, parse and validate.
/// Throws ConfigError listing every violation.
struct LoadedScenario {
    ScenarioConfig config;
    nlohmann::json merged;
    ValidationReport report;
};
LoadedScenario load_scenario(const std::string& path,
                             const std::vector<std::string>& overrides = {});

/// Same pipeline but without failing on validation errors; for `validate`.
LoadedScenario inspect_scenario(const std::string& path,
                                const std::vector<std::string>& overrides = {});

nlohmann::json metrics_to_json(const RunResult& result);

}  // namespace hexsim
