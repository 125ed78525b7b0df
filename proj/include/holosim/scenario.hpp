#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holosim/holonomy.hpp"
#include "holosim/lindblad.hpp"
#include "holosim/model.hpp"

namespace holosim {

/// Drive parameters given directly instead of calibrated from a GateSpec.
struct ExplicitDrives {
    // single-qubit block: per-transmon sideband drives
    std::optional<double> alpha1, alpha2;
    double phi1 = 0.0, phi2 = 0.0;
    // two-qubit block: transmon-2 drive
    std::optional<double> beta;
    double phi2prime = 0.0;
};

/// Fully resolved run configuration. All rates and couplings in rad/ns.
struct ScenarioConfig {
    std::string scenario;
    bool two_qubit = false;
    DeviceConfig device;
    NoiseParams noise;
    FidelityModel fidelity_model = FidelityModel::with_J0_oscillation;
    std::optional<GateSpec> gate;
    std::optional<ExplicitDrives> drives;
    std::string initial_state;
    std::optional<double> t_final_ns;
    std::optional<double> dt_ns;
    std::string out_dir = ".";
    unsigned long long seed = 0;
    bool include_j2_sideband = false;
    double rate_scale = 1.0; // common multiplier on kappa, Gamma1, Gamma2

    void validate() const;
};

struct RunSummary {
    std::string scenario;
    std::vector<std::pair<std::string, double>> parameters; // resolved, rad/ns
    double xi = 0.0;
    double tau_ns = 0.0;
    double final_fidelity = 0.0;
    double peak_fidelity = 0.0;
    double peak_time_ns = 0.0;
    double leakage = 0.0;
    double trace_drift = 0.0;
    double wall_seconds = 0.0;
    std::vector<std::string> warnings;
};

struct RunResult {
    SimulationTrace trace;
    RunSummary summary;
};

std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(const std::string& name);

/// Reads and validates an INI config; unknown keys are rejected, units are
/// converted (MHz -> rad/ns by 2 pi 1e-3, kHz -> rad/ns by 2 pi 1e-6).
ScenarioConfig parse_config(const std::string& path);

/// Executes the configured scenario, writes <scenario>_trace.csv and
/// <scenario>_summary.json under out_dir, and returns both.
RunResult run_scenario(const ScenarioConfig& config);

/// As run_scenario but without touching the filesystem.
RunResult run_scenario_in_memory(const ScenarioConfig& config);

struct SweepRow {
    double value;
    RunSummary summary;
};

/// Independent runs over `values` of one parameter (kappa [kHz], g [MHz],
/// delta [MHz], anharmonicity [MHz], dt [ns], rate_scale [1]); rows ordered by
/// input value order. Writes <scenario>_sweep_<parameter>.csv under out_dir.
/// The HOLOSIM_WORKERS environment variable sizes the worker pool.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::string& parameter,
                                const std::vector<double>& values);

std::string trace_to_csv(const SimulationTrace& trace);
std::string summary_to_json(const RunSummary& summary);

} // namespace holosim
