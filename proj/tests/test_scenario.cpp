#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "holosim/errors.hpp"
#include "holosim/scenario.hpp"

using namespace holosim;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::filesystem::path write_temp_config(const std::string& name, const std::string& body) {
    const auto dir = std::filesystem::temp_directory_path() / "holosim_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path);
    out << body;
    return path;
}

} // namespace

TEST_CASE("builtin scenario catalogue") {
    const auto names = builtin_scenario_names();
    CHECK(names.size() == 5);
    for (const auto& n : names) CHECK_NOTHROW(builtin_scenario(n));
    CHECK_THROWS_AS(builtin_scenario("no-such-scenario"), ConfigError);
}

TEST_CASE("parse_config") {
    SUBCASE("minimal hadamard config resolves g from MHz") {
        const auto path = write_temp_config("minimal.ini",
                                            "scenario = hadamard-fig2a\n"
                                            "[device]\n"
                                            "g_mhz = 50\n");
        const ScenarioConfig c = parse_config(path.string());
        CHECK(c.device.g == doctest::Approx(0.314159265));
        CHECK(c.gate.has_value());
        CHECK(c.gate->theta == doctest::Approx(kPi / 4));
        CHECK(c.noise.kappa == doctest::Approx(2 * kPi * 1e-5));
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(parse_config("/nonexistent/nowhere.ini"), ConfigError);
    }
    SUBCASE("negative kappa rejected with key path") {
        const auto path = write_temp_config("negk.ini",
                                            "scenario = hadamard-fig2a\n"
                                            "[noise]\n"
                                            "kappa_khz = -3\n");
        CHECK_THROWS_WITH_AS(parse_config(path.string()),
                             doctest::Contains("kappa_khz"), ConfigError);
    }
    SUBCASE("unknown keys rejected") {
        const auto path = write_temp_config("unknown.ini",
                                            "scenario = hadamard-fig2a\n"
                                            "[device]\n"
                                            "coupling_mhz = 3\n");
        CHECK_THROWS_WITH_AS(parse_config(path.string()),
                             doctest::Contains("coupling_mhz"), ConfigError);
    }
    SUBCASE("drives and gate together are rejected") {
        const auto path = write_temp_config("both.ini",
                                            "scenario = hadamard-fig2a\n"
                                            "[drives]\n"
                                            "alpha1 = 0.4\n"
                                            "alpha2 = 1.2\n");
        CHECK_THROWS_AS(parse_config(path.string()), ConfigError);
    }
    SUBCASE("custom scenario with explicit drives parses") {
        const auto path = write_temp_config("custom.ini",
                                            "scenario = custom-single\n"
                                            "[device]\n"
                                            "g_mhz = 50\n"
                                            "delta_mhz = 500\n"
                                            "anharmonicity_mhz = 500\n"
                                            "[drives]\n"
                                            "alpha1 = 0.4236\n"
                                            "alpha2 = 1.2068\n"
                                            "[run]\n"
                                            "initial_state = 0L\n");
        const ScenarioConfig c = parse_config(path.string());
        CHECK(!c.gate.has_value());
        REQUIRE(c.drives.has_value());
        CHECK(*c.drives->alpha1 == doctest::Approx(0.4236));
    }
    SUBCASE("unknown scenario name") {
        const auto path = write_temp_config("unknown_scen.ini", "scenario = not-a-thing\n");
        CHECK_THROWS_AS(parse_config(path.string()), ConfigError);
    }
}

TEST_CASE("hadamard scenario runs and emits deterministic output") {
    ScenarioConfig c = builtin_scenario("hadamard-fig2a");
    const RunResult first = run_scenario_in_memory(c);
    CHECK(first.summary.final_fidelity > 0.99);
    CHECK(first.summary.tau_ns == doctest::Approx(18.5).epsilon(0.01));
    CHECK(first.summary.trace_drift < 1e-8);

    const RunResult second = run_scenario_in_memory(c);
    CHECK(trace_to_csv(first.trace) == trace_to_csv(second.trace)); // bit-identical

    SUBCASE("CSV schema") {
        const std::string csv = trace_to_csv(first.trace);
        CHECK(csv.rfind("t_ns,pop_0L,pop_1L,pop_EL,residual,fidelity\n", 0) == 0);
        size_t rows = 0;
        for (char ch : csv)
            if (ch == '\n') ++rows;
        CHECK(rows == 502); // header + 501 samples
    }
    SUBCASE("summary JSON carries the schema keys") {
        const std::string js = summary_to_json(first.summary);
        for (const char* key :
             {"\"scenario\"", "\"parameters\"", "\"xi\"", "\"tau_ns\"", "\"final_fidelity\"",
              "\"peak_fidelity\"", "\"peak_time_ns\"", "\"leakage\"", "\"trace_drift\"",
              "\"warnings\"", "\"wall_seconds\""})
            CHECK(js.find(key) != std::string::npos);
    }
    SUBCASE("file outputs are written") {
        c.out_dir = (std::filesystem::temp_directory_path() / "holosim_out").string();
        std::filesystem::remove_all(c.out_dir);
        run_scenario(c);
        CHECK(std::filesystem::exists(std::filesystem::path(c.out_dir) /
                                      "hadamard-fig2a_trace.csv"));
        CHECK(std::filesystem::exists(std::filesystem::path(c.out_dir) /
                                      "hadamard-fig2a_summary.json"));
    }
}

TEST_CASE("explicit-drive run matches the calibrated run") {
    ScenarioConfig cal = builtin_scenario("hadamard-fig2a");
    const RunResult calibrated = run_scenario_in_memory(cal);

    ScenarioConfig manual = cal;
    manual.gate.reset();
    ExplicitDrives d;
    // paper's Hadamard drive indices; phi1 = phi + pi, phi2 = 0
    d.alpha1 = 0.423558;
    d.alpha2 = 1.206835;
    d.phi1 = kPi;
    d.phi2 = 0.0;
    manual.drives = d;
    const RunResult explicit_run = run_scenario_in_memory(manual);
    CHECK(explicit_run.summary.final_fidelity ==
          doctest::Approx(calibrated.summary.final_fidelity).epsilon(1e-5));
}

TEST_CASE("run_sweep") {
    ScenarioConfig base = builtin_scenario("hadamard-fig2a");
    base.out_dir = (std::filesystem::temp_directory_path() / "holosim_sweep").string();
    std::filesystem::remove_all(base.out_dir);

    SUBCASE("single-value sweep equals the plain run") {
        const auto rows = run_sweep(base, "rate_scale", {1.0});
        REQUIRE(rows.size() == 1);
        const RunResult direct = run_scenario_in_memory(base);
        CHECK(rows[0].summary.final_fidelity ==
              doctest::Approx(direct.summary.final_fidelity).epsilon(1e-12));
        CHECK(std::filesystem::exists(std::filesystem::path(base.out_dir) /
                                      "hadamard-fig2a_sweep_rate_scale.csv"));
    }
    SUBCASE("empty value list rejected") {
        CHECK_THROWS_AS(run_sweep(base, "kappa", {}), ConfigError);
    }
    SUBCASE("non-sweepable parameter rejected") {
        CHECK_THROWS_AS(run_sweep(base, "flux_noise", {1.0}), ConfigError);
    }
    SUBCASE("fidelity is monotone non-increasing in the common rate") {
        const auto rows = run_sweep(base, "rate_scale", {1, 10, 30});
        for (size_t i = 1; i < rows.size(); ++i)
            CHECK(rows[i].summary.peak_fidelity <= rows[i - 1].summary.peak_fidelity + 1e-9);
    }
    SUBCASE("dt halving converges") {
        ScenarioConfig fine = base;
        const auto rows = run_sweep(fine, "dt", {0.008, 0.004, 0.002, 0.001});
        const double last = rows[3].summary.final_fidelity;
        const double prev = rows[2].summary.final_fidelity;
        CHECK(std::abs(last - prev) < 1e-4);
    }
}

TEST_CASE("third-level scenario reports the added infidelity") {
    const ScenarioConfig c = builtin_scenario("third-level");
    const RunResult r = run_scenario_in_memory(c);
    bool found = false;
    for (const auto& [key, value] : r.summary.parameters)
        if (key == "added_infidelity_vs_2level") {
            found = true;
            CHECK(value < 0.002); // hard bound
        }
    CHECK(found);
}
