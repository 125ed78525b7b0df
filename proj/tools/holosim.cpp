#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holosim/errors.hpp"
#include "holosim/scenario.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 numerical abort, 4 assertion failure
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAssert = 4;

std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size())
            throw holosim::ConfigError("--values: '" + item + "' is not a number");
        values.push_back(v);
    }
    return values;
}

void apply_overrides(holosim::ScenarioConfig& config, const std::string& out_dir, double dt_ns) {
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (dt_ns > 0) config.dt_ns = dt_ns;
}

void print_summary(const holosim::RunSummary& s) {
    std::printf("scenario         %s\n", s.scenario.c_str());
    std::printf("xi               %.6g rad/ns\n", s.xi);
    std::printf("tau              %.6g ns\n", s.tau_ns);
    std::printf("final fidelity   %.6f\n", s.final_fidelity);
    std::printf("peak fidelity    %.6f at %.4g ns\n", s.peak_fidelity, s.peak_time_ns);
    std::printf("leakage          %.3e\n", s.leakage);
    std::printf("trace drift      %.3e\n", s.trace_drift);
    std::printf("wall time        %.2f s\n", s.wall_seconds);
    for (const auto& w : s.warnings) std::printf("  %s\n", w.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for nonadiabatic holonomic gates in decoherence-free "
                 "subspaces on driven circuit QED"};
    app.require_subcommand(1);

    std::string config_path, out_dir, param, values_csv;
    double dt_ns = 0, assert_fidelity = -1;

    auto* run = app.add_subcommand("run", "Run one scenario from a config file");
    run->add_option("config", config_path, "INI config file")->required();
    run->add_option("--out-dir", out_dir, "Output directory override");
    run->add_option("--dt-ns", dt_ns, "Integrator step override (ns)");
    run->add_option("--assert-fidelity", assert_fidelity,
                    "Exit 4 when the final fidelity falls below this threshold");

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over a value list");
    sweep->add_option("config", config_path, "INI config file")->required();
    sweep->add_option("--param", param,
                      "Parameter: kappa [kHz], g [MHz], delta [MHz], anharmonicity [MHz], "
                      "dt [ns], rate_scale")
        ->required();
    sweep->add_option("--values", values_csv, "Comma-separated values")->required();
    sweep->add_option("--out-dir", out_dir, "Output directory override");
    sweep->add_option("--dt-ns", dt_ns, "Integrator step override (ns)");

    auto* calibrate =
        app.add_subcommand("calibrate", "Print drive calibration without simulating");
    calibrate->add_option("config", config_path, "INI config file")->required();

    app.add_subcommand("list-scenarios", "List built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-scenarios")) {
            for (const auto& name : holosim::builtin_scenario_names())
                std::printf("%s\n", name.c_str());
            return 0;
        }

        holosim::ScenarioConfig config = holosim::parse_config(config_path);
        apply_overrides(config, out_dir, dt_ns);

        if (app.got_subcommand("run")) {
            const holosim::RunResult result = holosim::run_scenario(config);
            print_summary(result.summary);
            if (assert_fidelity >= 0 && result.summary.final_fidelity < assert_fidelity) {
                std::fprintf(stderr, "assertion failed: final fidelity %.6f < %.6f\n",
                             result.summary.final_fidelity, assert_fidelity);
                return kExitAssert;
            }
        } else if (app.got_subcommand("sweep")) {
            const auto rows = holosim::run_sweep(config, param, parse_value_list(values_csv));
            std::printf("%-14s %-12s %-12s %-12s\n", param.c_str(), "tau_ns", "final_fid",
                        "peak_fid");
            for (const auto& row : rows)
                std::printf("%-14.6g %-12.6g %-12.8f %-12.8f\n", row.value,
                            row.summary.tau_ns, row.summary.final_fidelity,
                            row.summary.peak_fidelity);
        } else if (app.got_subcommand("calibrate")) {
            using holosim::GateSpec;
            if (!config.gate)
                throw holosim::ConfigError("calibrate: config supplies explicit drives; "
                                           "nothing to calibrate");
            const holosim::CalibrationResult cal =
                config.two_qubit
                    ? holosim::calibrate_double(*config.gate, config.device)
                    : holosim::calibrate_single(*config.gate, config.device.g,
                                                config.device.delta_big);
            if (config.two_qubit) {
                std::printf("beta        %.10g\n", cal.beta);
                std::printf("phi2prime   %.10g rad\n", cal.phi2prime);
            } else {
                std::printf("alpha1      %.10g\n", cal.alpha1);
                std::printf("alpha2      %.10g\n", cal.alpha2);
                std::printf("phi1        %.10g rad\n", cal.phi1);
                std::printf("phi2        %.10g rad\n", cal.phi2);
            }
            std::printf("xi          %.10g rad/ns\n", cal.xi);
            std::printf("tau         %.10g ns\n", cal.tau);
            for (const auto& d : cal.diagnostics) std::printf("  %s\n", d.c_str());
        }
    } catch (const holosim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const holosim::NumericalError& e) {
        std::fprintf(stderr, "numerical abort: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return 0;
}
