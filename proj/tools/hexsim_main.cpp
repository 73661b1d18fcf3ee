#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hexsim/config_io.hpp"
#include "hexsim/csv_log.hpp"
#include "hexsim/sim.hpp"
#include "hexsim/svg_plot.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitIo = 4;

namespace fs = std::filesystem;

std::string default_out_dir() {
    const char* env = std::getenv("HEXSIM_OUT");
    return env != nullptr ? env : ".";
}

void print_metrics(const hexsim::RunResult& result, const std::string& name) {
    std::cout << name << ": "
              << (result.status == hexsim::RunStatus::Completed ? "completed" : "diverged")
              << " at t=" << result.end_time << " s\n";
    if (result.status == hexsim::RunStatus::Diverged) {
        std::cout << "  reason: " << result.divergence_reason << "\n";
        return;
    }
    const hexsim::TrackingMetrics& m = result.metrics;
    std::cout << "  rms position error: " << m.rms_position_error << " m\n"
              << "  max position error: " << m.max_position_error << " m\n"
              << "  rms attitude error: " << hexsim::rad2deg(m.rms_attitude_error)
              << " deg\n"
              << "  max attitude error: " << hexsim::rad2deg(m.max_attitude_error)
              << " deg\n"
              << "  settling time: ";
    if (m.settling_time >= 0.0) {
        std::cout << m.settling_time << " s\n";
    } else {
        std::cout << "never\n";
    }
    std::cout << "  saturation fraction: " << m.saturation_fraction << "\n";
}

int write_outputs(const hexsim::LoadedScenario& loaded, const hexsim::RunResult& result,
                  const fs::path& dir) {
    try {
        fs::create_directories(dir);
        hexsim::write_csv(result.log, (dir / "log.csv").string());

        std::ofstream metrics(dir / "metrics.json");
        metrics << hexsim::metrics_to_json(result).dump(2) << '\n';

        nlohmann::json meta;
        meta["tool"] = "hexsim";
        meta["version"] = hexsim::kVersion;
        meta["scenario"] = loaded.merged;
        std::ofstream meta_out(dir / "meta.json");
        meta_out << meta.dump(2) << '\n';
        if (!metrics || !meta_out) {
            throw std::runtime_error("write failed");
        }
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

struct RunOutcome {
    int exit_code = kExitOk;
    std::string name;
    hexsim::RunResult result;
    bool ran = false;
};

RunOutcome run_one(const std::string& scenario_path, const fs::path& out_dir,
                   const std::vector<std::string>& overrides, int decimation,
                   bool quiet) {
    RunOutcome outcome;
    hexsim::LoadedScenario loaded;
    try {
        loaded = hexsim::load_scenario(scenario_path, overrides);
    } catch (const hexsim::ConfigError& e) {
        std::cerr << e.what() << "\n";
        outcome.exit_code = kExitConfig;
        return outcome;
    }
    if (decimation > 0) {
        loaded.config.log_decimation = decimation;
    }
    outcome.name = loaded.config.name;
    for (const std::string& w : loaded.report.warnings) {
        std::cerr << "warning: " << w << "\n";
    }

    outcome.result = hexsim::run_scenario(loaded.config);
    outcome.ran = true;
    const int io = write_outputs(loaded, outcome.result, out_dir);
    if (io != kExitOk) {
        outcome.exit_code = io;
        return outcome;
    }
    if (!quiet) {
        print_metrics(outcome.result, outcome.name);
    }
    outcome.exit_code =
        outcome.result.status == hexsim::RunStatus::Completed ? kExitOk : kExitDiverged;
    return outcome;
}

int cmd_validate(const std::string& path, const std::vector<std::string>& overrides) {
    nlohmann::json doc;
    try {
        doc = hexsim::load_json_file(path);
    } catch (const hexsim::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    hexsim::ValidationReport report;
    if (doc.contains("trajectory") || doc.contains("duration_s")) {
        try {
            hexsim::LoadedScenario loaded = hexsim::inspect_scenario(path, overrides);
            report = loaded.report;
        } catch (const hexsim::ConfigError& e) {
            std::cerr << e.what() << "\n";
            return kExitConfig;
        }
    } else if (doc.contains("gains")) {
        hexsim::ControllerConfig cfg = hexsim::controller_from_json(doc, report);
        if (report.ok()) {
            report.merge(hexsim::validate(cfg));
        }
    } else {
        hexsim::AirframeConfig cfg = hexsim::airframe_from_json(doc, report);
        if (report.ok()) {
            report.merge(hexsim::validate(cfg));
        }
    }

    std::cout << report.str();
    if (!report.ok()) {
        std::cerr << path << ": invalid (" << report.errors.size() << " violation"
                  << (report.errors.size() == 1 ? "" : "s") << ")\n";
        return kExitConfig;
    }
    std::cout << path << ": ok\n";
    return kExitOk;
}

int cmd_plot(const std::string& log_path, const fs::path& out_dir) {
    hexsim::SimLog log;
    try {
        log = hexsim::read_csv(log_path);
        if (log.empty()) {
            throw std::runtime_error(log_path + ": log has no rows");
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    try {
        fs::create_directories(out_dir);
        hexsim::write_trajectory_svg(log, (out_dir / "trajectory.svg").string());
        hexsim::write_attitude_svg(log, (out_dir / "attitude.svg").string());
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    std::cout << "wrote " << (out_dir / "trajectory.svg").string() << " and "
              << (out_dir / "attitude.svg").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hexsim: dual-frame passively-tilting hexacopter simulator"};
    app.require_subcommand(1);

    std::vector<std::string> scenario_paths;
    std::string out_dir = default_out_dir();
    std::vector<std::string> overrides;
    int decimation = -1;
    bool quiet = false;
    bool verbose = false;
    std::string log_path;

    auto add_common = [&](CLI::App* cmd, bool multi_scenario) {
        if (multi_scenario) {
            cmd->add_option("--scenario", scenario_paths, "scenario JSON path")
                ->required()
                ->expected(-1);
        } else {
            scenario_paths.resize(1);
            cmd->add_option("--scenario", scenario_paths[0], "scenario JSON path")
                ->required();
        }
        cmd->add_option("--out", out_dir, "output directory (default $HEXSIM_OUT or .)");
        cmd->add_option("--set", overrides, "dotted-key override, e.g. a.b.c=1.5");
        cmd->add_option("--decimation", decimation, "log every n-th physics tick");
        cmd->add_flag("--quiet", quiet, "suppress the metric summary");
        cmd->add_flag("--verbose", verbose, "extra progress output");
    };

    CLI::App* run = app.add_subcommand("run", "run one scenario");
    add_common(run, false);
    CLI::App* suite = app.add_subcommand("suite", "run several scenarios in parallel");
    add_common(suite, true);

    CLI::App* validate = app.add_subcommand("validate", "check a config without running");
    std::string validate_path;
    validate->add_option("--scenario", validate_path, "scenario/airframe/controller JSON")
        ->required();
    validate->add_option("--set", overrides, "dotted-key override");

    CLI::App* plot = app.add_subcommand("plot", "render SVG plots from a log");
    plot->add_option("--log", log_path, "log.csv path")->required();
    plot->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed()) {
        return run_one(scenario_paths[0], out_dir, overrides, decimation, quiet).exit_code;
    }

    if (suite->parsed()) {
        std::vector<std::future<RunOutcome>> futures;
        futures.reserve(scenario_paths.size());
        for (const std::string& path : scenario_paths) {
            futures.push_back(std::async(std::launch::async, [&, path] {
                const std::string stem = fs::path(path).stem().string();
                return run_one(path, fs::path(out_dir) / stem, overrides, decimation,
                               true);
            }));
        }
        nlohmann::json summary = nlohmann::json::array();
        int exit_code = kExitOk;
        for (size_t i = 0; i < futures.size(); ++i) {
            RunOutcome outcome = futures[i].get();
            exit_code = std::max(exit_code, outcome.exit_code);
            if (outcome.ran) {
                if (!quiet) {
                    print_metrics(outcome.result, outcome.name);
                }
                nlohmann::json entry = hexsim::metrics_to_json(outcome.result);
                entry["scenario"] = scenario_paths[i];
                entry["name"] = outcome.name;
                summary.push_back(entry);
            }
        }
        try {
            fs::create_directories(out_dir);
            std::ofstream out(fs::path(out_dir) / "suite_summary.json");
            out << summary.dump(2) << '\n';
            if (!out) {
                throw std::runtime_error("write failed");
            }
        } catch (const std::exception& e) {
            std::cerr << "output error: " << e.what() << "\n";
            return kExitIo;
        }
        return exit_code;
    }

    if (validate->parsed()) {
        return cmd_validate(validate_path, overrides);
    }

    if (plot->parsed()) {
        return cmd_plot(log_path, out_dir);
    }
    return kExitConfig;
}
