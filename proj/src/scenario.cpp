#include "holosim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "holosim/errors.hpp"
#include "holosim/metrics.hpp"

namespace holosim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMhzToRadNs = 2 * kPi * 1e-3;
constexpr double kKhzToRadNs = 2 * kPi * 1e-6;

std::string fmt10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

CVector initial_amps_single(const std::string& name) {
    CVector v(2);
    const double r = 1.0 / std::sqrt(2.0);
    if (name == "0L")
        v << 1, 0;
    else if (name == "1L")
        v << 0, 1;
    else if (name == "+L")
        v << r, r;
    else if (name == "-L")
        v << r, -r;
    else
        throw ConfigError("run.initial_state: unknown state '" + name +
                          "' (expected 0L, 1L, +L or -L)");
    return v;
}

CVector initial_amps_double(const std::string& name) {
    CVector v = CVector::Zero(4);
    if (name == "00L")
        v(0) = 1;
    else if (name == "01L")
        v(1) = 1;
    else if (name == "10L")
        v(2) = 1;
    else if (name == "11L")
        v(3) = 1;
    else
        throw ConfigError("run.initial_state: unknown state '" + name +
                          "' (expected 00L, 01L, 10L or 11L)");
    return v;
}

struct ResolvedSingle {
    DriveParams d1, d2;
    double theta = 0, phi = 0;
    double alpha1 = 0, alpha2 = 0, phi1 = 0, phi2 = 0;
    double xi = 0, tau = 0;
    std::vector<std::string> diagnostics;
};

ResolvedSingle resolve_single(const ScenarioConfig& c) {
    ResolvedSingle r;
    const double delta = c.device.delta_big;
    if (c.gate) {
        const CalibrationResult cal = calibrate_single(*c.gate, c.device.g, delta);
        r.alpha1 = cal.alpha1;
        r.alpha2 = cal.alpha2;
        r.phi1 = cal.phi1;
        r.phi2 = cal.phi2;
        r.xi = cal.xi;
        r.tau = cal.tau;
        r.theta = c.gate->theta;
        r.phi = c.gate->phi;
        r.diagnostics = cal.diagnostics;
    } else {
        r.alpha1 = *c.drives->alpha1;
        r.alpha2 = *c.drives->alpha2;
        r.phi1 = c.drives->phi1;
        r.phi2 = c.drives->phi2;
        const double j1a1 = bessel_j(1, r.alpha1), j1a2 = bessel_j(1, r.alpha2);
        r.xi = c.device.g * std::hypot(j1a1, j1a2);
        if (r.xi <= 0)
            throw ConfigError("drives: effective Rabi frequency is zero; no gate time exists");
        r.tau = kPi / r.xi;
        r.theta = 2 * std::atan2(j1a1, j1a2);
        r.phi = normalize_phase(r.phi1 - r.phi2 - kPi);
    }
    r.d1 = DriveParams{r.alpha1 * delta, delta, r.phi1};
    r.d2 = DriveParams{r.alpha2 * delta, delta, r.phi2};
    return r;
}

struct ResolvedDouble {
    DriveParams d2;
    double theta = 0, phi = 0;
    double beta = 0, phi2prime = 0;
    double xi = 0, tau_analytic = 0;
    std::vector<std::string> diagnostics;
};

ResolvedDouble resolve_double(const ScenarioConfig& c) {
    ResolvedDouble r;
    if (c.gate) {
        const CalibrationResult cal = calibrate_double(*c.gate, c.device);
        r.beta = cal.beta;
        r.phi2prime = cal.phi2prime;
        r.xi = cal.xi;
        r.tau_analytic = cal.tau;
        r.theta = c.gate->theta;
        r.phi = c.gate->phi;
        r.diagnostics = cal.diagnostics;
    } else {
        r.beta = *c.drives->beta;
        r.phi2prime = c.drives->phi2prime;
        const double j0 = bessel_j(0, r.beta), j1 = bessel_j(1, r.beta);
        r.theta = 2 * std::atan2(c.device.g3_eff() * j1, c.device.g * j0);
        r.phi = normalize_phase(r.phi2prime - kPi / 2);
        r.xi = std::abs(effective_coupling_eta(c.device)) * std::hypot(j0, j1);
        if (r.xi <= 0)
            throw ConfigError("drives: effective Rabi frequency is zero; no gate time exists");
        r.tau_analytic = kPi / r.xi;
    }
    const double omega = 2 * c.device.delta_small;
    r.d2 = DriveParams{r.beta * omega, omega, r.phi2prime};
    return r;
}

NoiseParams scaled_noise(const ScenarioConfig& c) {
    NoiseParams n = c.noise;
    n.kappa *= c.rate_scale;
    n.gamma1 *= c.rate_scale;
    n.gamma2 *= c.rate_scale;
    return n;
}

void fill_common_summary(RunSummary& s, const ScenarioConfig& c, const SimulationTrace& trace) {
    const auto& fid = trace.series_for("fidelity");
    s.final_fidelity = std::clamp(fid.back(), 0.0, 1.0);
    size_t peak = 0;
    for (size_t i = 1; i < fid.size(); ++i)
        if (fid[i] > fid[peak]) peak = i;
    s.peak_fidelity = std::clamp(fid[peak], 0.0, 1.0);
    s.peak_time_ns = trace.times[peak];
    double pops_final = 0;
    for (size_t i = 0; i < trace.labels.size(); ++i)
        if (trace.labels[i].rfind("pop_", 0) == 0) pops_final += trace.series[i].back();
    s.leakage = trace.series_for("trace").back() - pops_final;
    s.trace_drift = trace.trace_drift;
    const NoiseParams n = scaled_noise(c);
    s.parameters.emplace_back("kappa", n.kappa);
    s.parameters.emplace_back("gamma1", n.gamma1);
    s.parameters.emplace_back("gamma2", n.gamma2);
    s.parameters.emplace_back("rate_scale", c.rate_scale);
    s.parameters.emplace_back("transmon_levels", c.device.transmon_levels);
    s.parameters.emplace_back("n_max", c.device.n_max);
    s.parameters.emplace_back("dt_ns", trace.dt);
    s.parameters.emplace_back("steps", static_cast<double>(trace.steps));
    s.parameters.emplace_back("seed", static_cast<double>(c.seed));
}

RunResult run_single_impl(const ScenarioConfig& c) {
    const auto t_start = std::chrono::steady_clock::now();
    std::vector<std::string> warnings = c.device.validate_single();
    const ResolvedSingle r = resolve_single(c);

    const HarmonicTermSum H =
        build_single_qubit_model(c.device, r.d1, r.d2, c.fidelity_model);
    const DfsBasis dfs = dfs_s1(H.space());
    const CollapseSet collapse = collapse_set_single(H.space(), scaled_noise(c));

    const CVector amps0 = initial_amps_single(c.initial_state);
    const DensityMatrix rho0 = DensityMatrix::pure(embed_logical_state(dfs, amps0));
    const Matrix gate =
        single_qubit_gate_matrix(GateSpec{r.theta, r.phi, GateSpec::Kind::single});
    CVector target_amps = gate * amps0;
    target_amps /= target_amps.norm();
    const StateVector target = embed_logical_state(dfs, target_amps);

    ObservableSet obs = population_observables(dfs);
    obs.push_back(fidelity_observable(target));
    obs.push_back({"trace", identity_op(H.space())});

    const double t_final = c.t_final_ns.value_or(r.tau);
    RunResult out{propagate_master(H, collapse, rho0, t_final, obs, c.dt_ns), {}};

    RunSummary& s = out.summary;
    s.scenario = c.scenario;
    s.xi = r.xi;
    s.tau_ns = r.tau;
    s.warnings = std::move(warnings);
    for (const auto& d : r.diagnostics) s.warnings.push_back("info: " + d);
    s.parameters.emplace_back("g", c.device.g);
    s.parameters.emplace_back("delta", c.device.delta_big);
    s.parameters.emplace_back("anharmonicity", c.device.anharmonicity);
    s.parameters.emplace_back("alpha1", r.alpha1);
    s.parameters.emplace_back("alpha2", r.alpha2);
    s.parameters.emplace_back("phi1", r.phi1);
    s.parameters.emplace_back("phi2", r.phi2);
    s.parameters.emplace_back("theta", r.theta);
    s.parameters.emplace_back("phi", r.phi);
    s.parameters.emplace_back("t_final_ns", t_final);
    fill_common_summary(s, c, out.trace);
    s.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

RunResult run_double_impl(const ScenarioConfig& c) {
    const auto t_start = std::chrono::steady_clock::now();
    std::vector<std::string> warnings = c.device.validate_double();
    const ResolvedDouble r = resolve_double(c);

    const HarmonicTermSum H =
        build_two_qubit_model(c.device, r.d2, c.include_j2_sideband);
    const DfsBasis dfs = dfs_s2(H.space());
    const CollapseSet collapse = collapse_set_double(H.space(), scaled_noise(c));

    const Matrix gate =
        two_qubit_gate_matrix(GateSpec{r.theta, r.phi, GateSpec::Kind::two_qubit});
    const RefineResult refined = refine_gate_time(H, gate, dfs, r.tau_analytic, c.dt_ns);
    for (const auto& w : refined.warnings) warnings.push_back(w);

    const CVector amps0 = initial_amps_double(c.initial_state);
    const DensityMatrix rho0 = DensityMatrix::pure(embed_logical_state(dfs, amps0));
    CVector target_amps = gate * amps0;
    target_amps /= target_amps.norm();
    const StateVector target = embed_logical_state(dfs, target_amps);

    ObservableSet obs = population_observables(dfs);
    obs.push_back(fidelity_observable(target));
    obs.push_back({"trace", identity_op(H.space())});

    const double t_final = c.t_final_ns.value_or(refined.tau);
    RunResult out{propagate_master(H, collapse, rho0, t_final, obs, c.dt_ns), {}};

    RunSummary& s = out.summary;
    s.scenario = c.scenario;
    s.xi = r.xi;
    s.tau_ns = refined.tau;
    s.warnings = std::move(warnings);
    for (const auto& d : r.diagnostics) s.warnings.push_back("info: " + d);
    s.parameters.emplace_back("g", c.device.g);
    s.parameters.emplace_back("g3", c.device.g3_eff());
    s.parameters.emplace_back("g4", c.device.g4_eff());
    s.parameters.emplace_back("delta", c.device.delta_small);
    s.parameters.emplace_back("lambda", c.device.lambda);
    s.parameters.emplace_back("anharmonicity", c.device.anharmonicity);
    s.parameters.emplace_back("beta", r.beta);
    s.parameters.emplace_back("phi2prime", r.phi2prime);
    s.parameters.emplace_back("theta", r.theta);
    s.parameters.emplace_back("phi", r.phi);
    s.parameters.emplace_back("tau_analytic_ns", r.tau_analytic);
    s.parameters.emplace_back("t_final_ns", t_final);
    s.parameters.emplace_back("include_j2_sideband", c.include_j2_sideband ? 1.0 : 0.0);
    fill_common_summary(s, c, out.trace);
    s.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

RunResult run_plain(const ScenarioConfig& c) {
    return c.two_qubit ? run_double_impl(c) : run_single_impl(c);
}

void apply_sweep_param(ScenarioConfig& c, const std::string& parameter, double value) {
    if (parameter == "kappa")
        c.noise.kappa = value * kKhzToRadNs;
    else if (parameter == "g")
        c.device.g = value * kMhzToRadNs;
    else if (parameter == "delta") {
        if (c.two_qubit)
            c.device.delta_small = value * kMhzToRadNs;
        else
            c.device.delta_big = value * kMhzToRadNs;
    } else if (parameter == "anharmonicity")
        c.device.anharmonicity = value * kMhzToRadNs;
    else if (parameter == "dt")
        c.dt_ns = value;
    else if (parameter == "rate_scale")
        c.rate_scale = value;
    else
        throw ConfigError("run_sweep: parameter '" + parameter + "' is not sweepable");
}

int worker_count() {
    if (const char* env = std::getenv("HOLOSIM_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return std::min(w, 64);
    }
    return 1;
}

std::vector<SweepRow> sweep_rows(const ScenarioConfig& base, const std::string& parameter,
                                 const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("run_sweep: empty value list");
    std::vector<SweepRow> rows(values.size());
    const int workers = std::min<int>(worker_count(), static_cast<int>(values.size()));
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1)) {
            try {
                ScenarioConfig c = base;
                apply_sweep_param(c, parameter, values[i]);
                rows[i] = {values[i], run_plain(c).summary};
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return rows;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << contents;
}

void write_run_outputs(const ScenarioConfig& c, const RunResult& result) {
    std::filesystem::create_directories(c.out_dir);
    const std::filesystem::path dir(c.out_dir);
    write_file(dir / (result.summary.scenario + "_trace.csv"), trace_to_csv(result.trace));
    write_file(dir / (result.summary.scenario + "_summary.json"),
               summary_to_json(result.summary));
}

RunResult run_third_level(const ScenarioConfig& c) {
    RunResult main = run_single_impl(c);

    ScenarioConfig baseline = c;
    baseline.scenario = "hadamard-fig2a";
    baseline.device.transmon_levels = 2;
    baseline.fidelity_model = FidelityModel::with_J0_oscillation;
    const RunResult base = run_single_impl(baseline);

    const double added = base.summary.final_fidelity - main.summary.final_fidelity;
    std::ostringstream os;
    os << "info: added infidelity vs 2-level run = " << fmt10(added)
       << " (2-level final fidelity = " << fmt10(base.summary.final_fidelity) << ")";
    main.summary.warnings.push_back(os.str());
    main.summary.parameters.emplace_back("added_infidelity_vs_2level", added);
    return main;
}

RunResult run_kappa_sweep(const ScenarioConfig& c, bool write) {
    const std::vector<double> scales = {1, 5, 10, 15, 20, 25, 30};
    ScenarioConfig leg_a = c;
    ScenarioConfig leg_b = c;
    leg_b.device.g *= 2;
    leg_b.device.delta_big *= 2;

    const auto rows_a = sweep_rows(leg_a, "rate_scale", scales);
    const auto rows_b = sweep_rows(leg_b, "rate_scale", scales);

    std::ostringstream table;
    table << "kappa_scale,g,delta,xi,tau_ns,final_fidelity,peak_fidelity,peak_time_ns\n";
    const auto emit = [&](const ScenarioConfig& leg, const std::vector<SweepRow>& rows) {
        for (const auto& row : rows) {
            table << fmt10(row.value) << ',' << fmt10(leg.device.g) << ','
                  << fmt10(leg.device.delta_big) << ',' << fmt10(row.summary.xi) << ','
                  << fmt10(row.summary.tau_ns) << ',' << fmt10(row.summary.final_fidelity)
                  << ',' << fmt10(row.summary.peak_fidelity) << ','
                  << fmt10(row.summary.peak_time_ns) << '\n';
        }
    };
    emit(leg_a, rows_a);
    emit(leg_b, rows_b);

    // Headline point of the sweep: base (g, Delta) pair at the largest decay rate
    ScenarioConfig headline_cfg = leg_a;
    headline_cfg.rate_scale = scales.back();
    RunResult headline = run_single_impl(headline_cfg);
    headline.summary.scenario = c.scenario;
    headline.summary.warnings.push_back(
        "info: summary reports the (g, Delta) pair at kappa' = 30 kappa; the full sweep "
        "is in the sweep CSV");

    if (write) {
        std::filesystem::create_directories(c.out_dir);
        write_file(std::filesystem::path(c.out_dir) / (c.scenario + "_sweep.csv"),
                   table.str());
    }
    return headline;
}

RunResult dispatch(const ScenarioConfig& c, bool write) {
    c.validate();
    RunResult result;
    if (c.scenario == "kappa-sweep-fig2b")
        result = run_kappa_sweep(c, write);
    else if (c.scenario == "third-level")
        result = run_third_level(c);
    else
        result = run_plain(c);
    if (write) write_run_outputs(c, result);
    return result;
}

} // namespace

RunResult run_scenario(const ScenarioConfig& config) { return dispatch(config, true); }

RunResult run_scenario_in_memory(const ScenarioConfig& config) { return dispatch(config, false); }

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::string& parameter,
                                const std::vector<double>& values) {
    base.validate();
    const auto rows = sweep_rows(base, parameter, values);

    std::ostringstream table;
    table << parameter
          << ",xi,tau_ns,final_fidelity,peak_fidelity,peak_time_ns,leakage,trace_drift\n";
    for (const auto& row : rows)
        table << fmt10(row.value) << ',' << fmt10(row.summary.xi) << ','
              << fmt10(row.summary.tau_ns) << ',' << fmt10(row.summary.final_fidelity) << ','
              << fmt10(row.summary.peak_fidelity) << ',' << fmt10(row.summary.peak_time_ns)
              << ',' << fmt10(row.summary.leakage) << ',' << fmt10(row.summary.trace_drift)
              << '\n';
    std::filesystem::create_directories(base.out_dir);
    write_file(std::filesystem::path(base.out_dir) /
                   (base.scenario + "_sweep_" + parameter + ".csv"),
               table.str());
    return rows;
}

std::string trace_to_csv(const SimulationTrace& trace) {
    std::vector<size_t> pop_cols;
    size_t fid_col = trace.labels.size(), trace_col = trace.labels.size();
    for (size_t i = 0; i < trace.labels.size(); ++i) {
        if (trace.labels[i].rfind("pop_", 0) == 0) pop_cols.push_back(i);
        if (trace.labels[i] == "fidelity") fid_col = i;
        if (trace.labels[i] == "trace") trace_col = i;
    }
    std::ostringstream os;
    os << "t_ns";
    for (size_t i : pop_cols) os << ',' << trace.labels[i];
    os << ",residual,fidelity\n";
    for (size_t k = 0; k < trace.times.size(); ++k) {
        os << fmt10(trace.times[k]);
        double pops = 0;
        for (size_t i : pop_cols) {
            os << ',' << fmt10(trace.series[i][k]);
            pops += trace.series[i][k];
        }
        const double total =
            trace_col < trace.labels.size() ? trace.series[trace_col][k] : 1.0;
        os << ',' << fmt10(total - pops);
        os << ',' << fmt10(fid_col < trace.labels.size() ? trace.series[fid_col][k] : 0.0);
        os << '\n';
    }
    return os.str();
}

std::string summary_to_json(const RunSummary& summary) {
    nlohmann::json j;
    j["scenario"] = summary.scenario;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : summary.parameters) params[key] = value;
    j["parameters"] = params;
    j["xi"] = summary.xi;
    j["tau_ns"] = summary.tau_ns;
    j["final_fidelity"] = summary.final_fidelity;
    j["peak_fidelity"] = summary.peak_fidelity;
    j["peak_time_ns"] = summary.peak_time_ns;
    j["leakage"] = summary.leakage;
    j["trace_drift"] = summary.trace_drift;
    j["warnings"] = summary.warnings;
    j["wall_seconds"] = summary.wall_seconds;
    return j.dump(2) + "\n";
}

} // namespace holosim
