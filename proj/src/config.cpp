#include <cmath>
#include <set>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "holosim/errors.hpp"
#include "holosim/scenario.hpp"

namespace holosim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMhzToRadNs = 2 * kPi * 1e-3;
constexpr double kKhzToRadNs = 2 * kPi * 1e-6;

const std::set<std::string> kDeviceKeys = {
    "g_mhz", "delta_mhz", "anharmonicity_mhz", "transmon_levels", "n_max",
    "delta_small_mhz", "lambda_mhz", "g2_mhz", "g3_mhz", "g4_mhz", "coupling_on"};
const std::set<std::string> kGateKeys = {"theta_rad", "phi_rad"};
const std::set<std::string> kDriveKeys = {"alpha1", "alpha2", "phi1_rad", "phi2_rad",
                                          "beta", "phi2prime_rad"};
const std::set<std::string> kNoiseKeys = {"kappa_khz", "gamma1_khz", "gamma2_khz"};
const std::set<std::string> kRunKeys = {"fidelity_model", "initial_state", "t_final_ns",
                                        "dt_ns", "seed", "include_j2_sideband"};
const std::set<std::string> kOutputKeys = {"out_dir"};

using boost::property_tree::ptree;

double get_double(const ptree& section, const std::string& path, const std::string& key) {
    try {
        return section.get<double>(key);
    } catch (const boost::property_tree::ptree_error&) {
        throw ConfigError(path + "." + key + ": not a number");
    }
}

int get_int(const ptree& section, const std::string& path, const std::string& key) {
    try {
        return section.get<int>(key);
    } catch (const boost::property_tree::ptree_error&) {
        throw ConfigError(path + "." + key + ": not an integer");
    }
}

bool get_bool(const ptree& section, const std::string& path, const std::string& key) {
    try {
        return section.get<bool>(key);
    } catch (const boost::property_tree::ptree_error&) {
        throw ConfigError(path + "." + key + ": not a boolean");
    }
}

void reject_unknown(const ptree& section, const std::string& name,
                    const std::set<std::string>& allowed) {
    for (const auto& [key, child] : section) {
        if (!child.empty())
            throw ConfigError(name + "." + key + ": nested sections are not allowed here");
        if (!allowed.count(key))
            throw ConfigError(name + "." + key + ": unknown key");
    }
}

} // namespace

std::vector<std::string> builtin_scenario_names() {
    return {"hadamard-fig2a", "kappa-sweep-fig2b", "third-level", "two-qubit-fig3",
            "two-qubit-lowanharm"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
    ScenarioConfig c;
    c.scenario = name;

    const auto paper_noise = [] {
        NoiseParams n;
        n.kappa = n.gamma1 = n.gamma2 = 2 * kPi * 1e-5; // 2 pi x 10 kHz
        return n;
    };

    const auto single_base = [&] {
        c.two_qubit = false;
        c.device.g = 2 * kPi * 0.05;             // 2 pi x 50 MHz
        c.device.delta_big = 2 * kPi * 0.5;      // 2 pi x 500 MHz
        c.device.anharmonicity = 2 * kPi * 0.5;  // equal to Delta
        c.device.transmon_levels = 2;
        c.device.n_max = 2;
        c.noise = paper_noise();
        c.gate = GateSpec{kPi / 4, 0.0, GateSpec::Kind::single};
        c.fidelity_model = FidelityModel::with_J0_oscillation;
        c.initial_state = "0L";
    };

    const auto double_base = [&] {
        c.two_qubit = true;
        c.device.g = 2 * kPi * 0.03;             // 2 pi x 30 MHz
        c.device.delta_small = 2 * kPi * 0.15;   // 2 pi x 150 MHz
        c.device.lambda = 2 * c.device.delta_small;
        c.device.anharmonicity = 2 * kPi * 0.5;
        c.device.transmon_levels = 2;
        c.device.n_max = 2;
        c.noise = paper_noise();
        c.gate = GateSpec{kPi / 4, 0.0, GateSpec::Kind::two_qubit};
        c.initial_state = "01L";
    };

    if (name == "hadamard-fig2a" || name == "kappa-sweep-fig2b") {
        single_base();
    } else if (name == "third-level") {
        single_base();
        c.device.transmon_levels = 3;
        c.fidelity_model = FidelityModel::with_third_level;
    } else if (name == "two-qubit-fig3") {
        double_base();
    } else if (name == "two-qubit-lowanharm") {
        double_base();
        c.device.g = 2 * kPi * 0.02;            // g = delta/5 = 2 pi x 20 MHz
        c.device.delta_small = 2 * kPi * 0.10;
        c.device.lambda = 2 * c.device.delta_small;
        c.device.anharmonicity = 2 * kPi * 0.3;
    } else if (name == "custom-single") {
        c.two_qubit = false;
    } else if (name == "custom-double") {
        c.two_qubit = true;
    } else {
        throw ConfigError("unknown scenario '" + name + "'");
    }
    return c;
}

void ScenarioConfig::validate() const {
    if (gate.has_value() == drives.has_value())
        throw ConfigError("config: exactly one of a gate spec and explicit drives must be "
                          "supplied");
    noise.validate();
    if (rate_scale < 0) throw ConfigError("config: rate_scale must be non-negative");
    if (t_final_ns && *t_final_ns <= 0) throw ConfigError("run.t_final_ns: must be positive");
    if (dt_ns && *dt_ns <= 0) throw ConfigError("run.dt_ns: must be positive");
    if (gate) {
        const auto want =
            two_qubit ? GateSpec::Kind::two_qubit : GateSpec::Kind::single;
        if (gate->kind != want) throw ConfigError("config: gate kind does not match scenario");
        if (!(gate->theta >= 0 && gate->theta <= kPi))
            throw ConfigError("gate.theta_rad: must lie in [0, pi]");
    }
    if (drives) {
        if (two_qubit) {
            if (!drives->beta) throw ConfigError("drives.beta: required for two-qubit runs");
            if (*drives->beta < 0) throw ConfigError("drives.beta: must be non-negative");
        } else {
            if (!drives->alpha1 || !drives->alpha2)
                throw ConfigError("drives.alpha1/alpha2: required for single-qubit runs");
            if (*drives->alpha1 < 0 || *drives->alpha2 < 0)
                throw ConfigError("drives.alpha1/alpha2: must be non-negative");
        }
    }
}

ScenarioConfig parse_config(const std::string& path) {
    ptree pt;
    try {
        boost::property_tree::ini_parser::read_ini(path, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config '" + path + "': " + e.message());
    }

    const auto scenario_node = pt.get_optional<std::string>("scenario");
    if (!scenario_node) throw ConfigError("config: missing top-level 'scenario' key");
    ScenarioConfig c = builtin_scenario(*scenario_node);

    for (const auto& [key, child] : pt) {
        if (child.empty()) {
            if (key != "scenario") throw ConfigError(key + ": unknown top-level key");
            continue;
        }
        if (key == "device") {
            reject_unknown(child, "device", kDeviceKeys);
            if (child.count("g_mhz"))
                c.device.g = get_double(child, "device", "g_mhz") * kMhzToRadNs;
            if (child.count("delta_mhz"))
                c.device.delta_big = get_double(child, "device", "delta_mhz") * kMhzToRadNs;
            if (child.count("anharmonicity_mhz"))
                c.device.anharmonicity =
                    get_double(child, "device", "anharmonicity_mhz") * kMhzToRadNs;
            if (child.count("transmon_levels"))
                c.device.transmon_levels = get_int(child, "device", "transmon_levels");
            if (child.count("n_max")) c.device.n_max = get_int(child, "device", "n_max");
            if (child.count("delta_small_mhz"))
                c.device.delta_small =
                    get_double(child, "device", "delta_small_mhz") * kMhzToRadNs;
            if (child.count("lambda_mhz"))
                c.device.lambda = get_double(child, "device", "lambda_mhz") * kMhzToRadNs;
            if (child.count("g2_mhz"))
                c.device.g2 = get_double(child, "device", "g2_mhz") * kMhzToRadNs;
            if (child.count("g3_mhz"))
                c.device.g3 = get_double(child, "device", "g3_mhz") * kMhzToRadNs;
            if (child.count("g4_mhz"))
                c.device.g4 = get_double(child, "device", "g4_mhz") * kMhzToRadNs;
            if (child.count("coupling_on"))
                c.device.coupling_on = get_bool(child, "device", "coupling_on");
        } else if (key == "gate") {
            reject_unknown(child, "gate", kGateKeys);
            GateSpec spec;
            spec.kind = c.two_qubit ? GateSpec::Kind::two_qubit : GateSpec::Kind::single;
            spec.theta = c.gate ? c.gate->theta : 0.0;
            spec.phi = c.gate ? c.gate->phi : 0.0;
            if (child.count("theta_rad")) spec.theta = get_double(child, "gate", "theta_rad");
            if (child.count("phi_rad"))
                spec.phi = normalize_phase(get_double(child, "gate", "phi_rad"));
            c.gate = spec;
        } else if (key == "drives") {
            reject_unknown(child, "drives", kDriveKeys);
            if (c.gate)
                throw ConfigError("drives: explicit drives and a gate spec cannot both be "
                                  "supplied");
            ExplicitDrives d;
            if (child.count("alpha1")) d.alpha1 = get_double(child, "drives", "alpha1");
            if (child.count("alpha2")) d.alpha2 = get_double(child, "drives", "alpha2");
            if (child.count("phi1_rad")) d.phi1 = get_double(child, "drives", "phi1_rad");
            if (child.count("phi2_rad")) d.phi2 = get_double(child, "drives", "phi2_rad");
            if (child.count("beta")) d.beta = get_double(child, "drives", "beta");
            if (child.count("phi2prime_rad"))
                d.phi2prime = get_double(child, "drives", "phi2prime_rad");
            c.drives = d;
        } else if (key == "noise") {
            reject_unknown(child, "noise", kNoiseKeys);
            if (child.count("kappa_khz"))
                c.noise.kappa = get_double(child, "noise", "kappa_khz") * kKhzToRadNs;
            if (child.count("gamma1_khz"))
                c.noise.gamma1 = get_double(child, "noise", "gamma1_khz") * kKhzToRadNs;
            if (child.count("gamma2_khz"))
                c.noise.gamma2 = get_double(child, "noise", "gamma2_khz") * kKhzToRadNs;
            if (c.noise.kappa < 0) throw ConfigError("noise.kappa_khz: must be >= 0");
            if (c.noise.gamma1 < 0) throw ConfigError("noise.gamma1_khz: must be >= 0");
            if (c.noise.gamma2 < 0) throw ConfigError("noise.gamma2_khz: must be >= 0");
        } else if (key == "run") {
            reject_unknown(child, "run", kRunKeys);
            if (child.count("fidelity_model")) {
                try {
                    c.fidelity_model =
                        fidelity_model_from_string(child.get<std::string>("fidelity_model"));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("run.fidelity_model: ") + e.what());
                }
            }
            if (child.count("initial_state"))
                c.initial_state = child.get<std::string>("initial_state");
            if (child.count("t_final_ns")) c.t_final_ns = get_double(child, "run", "t_final_ns");
            if (child.count("dt_ns")) c.dt_ns = get_double(child, "run", "dt_ns");
            if (child.count("seed"))
                c.seed = child.get<unsigned long long>("seed");
            if (child.count("include_j2_sideband"))
                c.include_j2_sideband = get_bool(child, "run", "include_j2_sideband");
        } else if (key == "output") {
            reject_unknown(child, "output", kOutputKeys);
            if (child.count("out_dir")) c.out_dir = child.get<std::string>("out_dir");
        } else {
            throw ConfigError(key + ": unknown section");
        }
    }

    c.validate();
    return c;
}

} // namespace holosim
