#include <doctest.h>

#include <cmath>
#include <random>

#include "holosim/model.hpp"

using namespace holosim;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent oracle: ascending series J_m(x) = sum_k (-1)^k (x/2)^{m+2k} / (k! (m+k)!)
double bessel_series(int m, double x) {
    const double half = x / 2;
    double term = 1.0;
    for (int i = 1; i <= m; ++i) term *= half / i;
    double sum = term;
    for (int k = 1; k < 80; ++k) {
        term *= -half * half / (k * (m + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

DeviceConfig paper_single_device() {
    DeviceConfig d;
    d.g = 2 * kPi * 0.05;
    d.delta_big = 2 * kPi * 0.5;
    d.anharmonicity = d.delta_big;
    return d;
}

DeviceConfig paper_double_device() {
    DeviceConfig d;
    d.g = 2 * kPi * 0.03;
    d.delta_small = 2 * kPi * 0.15;
    d.lambda = 2 * d.delta_small;
    d.anharmonicity = 2 * kPi * 0.5;
    return d;
}

// Total excitation operator: one quantum per occupied qubit level |1>, plus photons.
QOperator excitation_number(const HilbertSpace& space) {
    Matrix n = Matrix::Zero(space.total_dim(), space.total_dim());
    QOperator total(space, n);
    for (int k = 0; k < space.subsystem_count(); ++k) {
        const std::string& label = space.label(k);
        if (label[0] == 'q') {
            QOperator sig = transmon_lowering(space, label, 1);
            total = total + dagger(sig) * sig;
        } else {
            QOperator a = annihilation(space, label);
            total = total + dagger(a) * a;
        }
    }
    return total;
}

} // namespace

TEST_CASE("bessel_j values") {
    CHECK(bessel_j(0, 0.0) == doctest::Approx(1.0));
    CHECK(bessel_j(1, 0.0) == doctest::Approx(0.0));
    // values quoted for the two-qubit drive point
    CHECK(bessel_j(0, 0.77) == doctest::Approx(0.86).epsilon(0.005));
    CHECK(bessel_j(1, 0.77) == doctest::Approx(0.36).epsilon(0.01));
    // single-qubit Hadamard drive point
    CHECK(bessel_j(1, 0.4236) == doctest::Approx(0.207).epsilon(0.002));
    CHECK(bessel_j(1, 1.2068) == doctest::Approx(0.5).epsilon(0.001));

    SUBCASE("matches the ascending-series oracle") {
        for (int m = 0; m <= 5; ++m)
            for (double x = 0.0; x <= 10.0; x += 0.37)
                CHECK(std::abs(bessel_j(m, x) - bessel_series(m, x)) < 1e-10);
    }
    SUBCASE("domain guard") {
        CHECK_THROWS_AS(bessel_j(-1, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(bessel_j(21, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(bessel_j(0, -0.5), std::invalid_argument);
        CHECK_THROWS_AS(bessel_j(0, 25.0), std::invalid_argument);
    }
}

TEST_CASE("jacobi_anger_expand") {
    SUBCASE("alpha = 0 collapses to the constant term") {
        auto exp0 = jacobi_anger_expand(0.0, 1.0, 0.3, 8);
        REQUIRE(exp0.size() == 1);
        CHECK(exp0[0].order == 0);
        CHECK(std::abs(exp0[0].coefficient - Complex(1, 0)) < 1e-15);
        CHECK(exp0[0].frequency_shift == 0.0);
    }
    SUBCASE("paper's J1(alpha2) = 0.5 sideband pair") {
        const double alpha = 1.2068, phi = 0.4;
        auto exp1 = jacobi_anger_expand(alpha, 2.0, phi, 2);
        REQUIRE(exp1.size() == 5);
        // m = +-1 coefficients: i^{+-1} J_1(alpha) e^{-+ i phi}
        for (const auto& term : exp1) {
            if (term.order == 1)
                CHECK(std::abs(term.coefficient -
                               Complex(0, 1) * bessel_j(1, alpha) * std::exp(Complex(0, -phi))) <
                      1e-12);
            if (term.order == -1)
                CHECK(std::abs(term.coefficient -
                               Complex(0, -1) * (-bessel_j(1, alpha)) * std::exp(Complex(0, phi))) <
                      1e-12);
            if (term.order == 1) CHECK(std::abs(term.coefficient) == doctest::Approx(0.5).epsilon(1e-3));
        }
    }
    SUBCASE("pointwise reconstruction against the complex exponential") {
        const double alpha = 1.5, omega = 0.9, phi = 1.1;
        auto terms = jacobi_anger_expand(alpha, omega, phi, 12);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> tdist(0.0, 50.0);
        for (int trial = 0; trial < 100; ++trial) {
            const double t = tdist(rng);
            Complex sum = 0;
            for (const auto& term : terms)
                sum += term.coefficient * std::exp(Complex(0, term.frequency_shift * t));
            const Complex exact = std::exp(Complex(0, alpha * std::cos(omega * t - phi)));
            CHECK(std::abs(sum - exact) < 1e-8);
        }
    }
    SUBCASE("reconstruction error decreases monotonically with max_order") {
        const double alpha = 1.8, omega = 1.3, phi = 0.2;
        double previous = 1e9;
        for (int order = 1; order <= 12; ++order) {
            auto terms = jacobi_anger_expand(alpha, omega, phi, order);
            double worst = 0;
            for (int i = 0; i < 40; ++i) {
                const double t = 0.17 * i;
                Complex sum = 0;
                for (const auto& term : terms)
                    sum += term.coefficient * std::exp(Complex(0, term.frequency_shift * t));
                worst = std::max(worst,
                                 std::abs(sum - std::exp(Complex(0, alpha * std::cos(omega * t - phi)))));
            }
            CHECK(worst <= previous + 1e-15);
            previous = worst;
        }
    }
}

TEST_CASE("single-qubit model construction") {
    DeviceConfig dev = paper_single_device();
    const double delta = dev.delta_big;
    // paper Hadamard drive amplitudes
    DriveParams d1{0.4236 * delta, delta, 0.0};
    DriveParams d2{1.2068 * delta, delta, 0.0};

    SUBCASE("zero drives give an empty resonant model") {
        DriveParams off1{0.0, delta, 0.0}, off2{0.0, delta, 0.0};
        auto H = build_single_qubit_model(dev, off1, off2, FidelityModel::resonant_only);
        CHECK(H.evaluate(0.37).matrix().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("effective Rabi frequency approx 0.54 g for the Hadamard point") {
        auto H = build_single_qubit_model(dev, d1, d2, FidelityModel::resonant_only);
        // xi_1 = |<E|H|0>| combined over both transmons
        const auto space = H.space();
        const auto e_ket = basis_ket(space, {0, 0, 1});
        const auto zero = basis_ket(space, {1, 0, 0});
        const auto one = basis_ket(space, {0, 1, 0});
        const Matrix h0 = H.evaluate(0.0).matrix();
        const Complex g1 = e_ket.vector().dot(h0 * zero.vector());
        const Complex g2 = e_ket.vector().dot(h0 * one.vector());
        const double xi = std::hypot(std::abs(g1), std::abs(g2));
        CHECK(xi / dev.g == doctest::Approx(0.54).epsilon(0.005));
    }
    SUBCASE("g_j phase convention: coefficient equals g J1(alpha) e^{i(phi+pi/2)}") {
        const double phi1 = 0.7;
        DriveParams d1p{0.4236 * delta, delta, phi1};
        auto H = build_single_qubit_model(dev, d1p, d2, FidelityModel::resonant_only);
        const auto space = H.space();
        const Complex coeff = basis_ket(space, {0, 0, 1})
                                  .vector()
                                  .dot(H.evaluate(0.0).matrix() * basis_ket(space, {1, 0, 0}).vector());
        const Complex expect =
            dev.g * bessel_j(1, 0.4236) * std::exp(Complex(0, phi1 + kPi / 2));
        CHECK(std::abs(coeff - expect) < 1e-12);
    }
    SUBCASE("oscillating model exposes the detuning as max_frequency") {
        auto H = build_single_qubit_model(dev, d1, d2, FidelityModel::with_J0_oscillation);
        CHECK(H.max_frequency() == doctest::Approx(2 * kPi * 0.5));
    }
    SUBCASE("third level requires 3-level transmons") {
        CHECK_THROWS_AS(build_single_qubit_model(dev, d1, d2, FidelityModel::with_third_level),
                        std::invalid_argument);
        DeviceConfig dev3 = dev;
        dev3.transmon_levels = 3;
        auto H = build_single_qubit_model(dev3, d1, d2, FidelityModel::with_third_level);
        CHECK(H.max_frequency() == doctest::Approx(2 * delta));
    }
    SUBCASE("drive must run at the sideband resonance") {
        DriveParams wrong{0.4 * delta, 0.9 * delta, 0.0};
        CHECK_THROWS_AS(build_single_qubit_model(dev, wrong, d2, FidelityModel::resonant_only),
                        std::invalid_argument);
    }
    SUBCASE("total excitation is conserved up to with_J0_J2") {
        for (auto model : {FidelityModel::resonant_only, FidelityModel::with_J0_oscillation,
                           FidelityModel::with_J0_J2}) {
            auto H = build_single_qubit_model(dev, d1, d2, model);
            const QOperator n = excitation_number(H.space());
            std::mt19937_64 rng(11);
            std::uniform_real_distribution<double> tdist(0.0, 40.0);
            for (int i = 0; i < 5; ++i)
                CHECK(commutator(H.evaluate(tdist(rng)), n).matrix().cwiseAbs().maxCoeff() <
                      1e-12);
        }
    }
    SUBCASE("evaluate is Hermitian at random times") {
        DeviceConfig dev3 = dev;
        dev3.transmon_levels = 3;
        auto H = build_single_qubit_model(dev3, d1, d2, FidelityModel::with_third_level);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> tdist(0.0, 40.0);
        for (int i = 0; i < 20; ++i)
            CHECK(H.evaluate(tdist(rng)).hermiticity_defect() <= 1e-12);
    }
}

TEST_CASE("two-qubit model construction") {
    DeviceConfig dev = paper_double_device();
    const double delta = dev.delta_small;
    DriveParams drive2{0.77 * 2 * delta, 2 * delta, kPi / 2}; // beta = 0.77, phi = 0

    SUBCASE("cavity hopping block has delocalized modes split by +-lambda") {
        auto H = build_two_qubit_model(dev, drive2);
        // restrict the static part to the single-photon pair {|c1=1>, |c2=1>}
        const auto space = H.space();
        const auto p10 = basis_ket(space, {0, 0, 1, 0, 0, 0});
        const auto p01 = basis_ket(space, {0, 0, 0, 0, 0, 1});
        const Matrix hs = H.static_part();
        Eigen::Matrix2cd block;
        block << p10.vector().dot(hs * p10.vector()), p10.vector().dot(hs * p01.vector()),
            p01.vector().dot(hs * p10.vector()), p01.vector().dot(hs * p01.vector());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
        CHECK(es.eigenvalues()(0) == doctest::Approx(-dev.lambda));
        CHECK(es.eigenvalues()(1) == doctest::Approx(+dev.lambda));
    }
    SUBCASE("g = 0 leaves only the photon-exchange block") {
        // build with tiny transmon coupling so only H_cc survives numerically
        DeviceConfig weak = dev;
        weak.g = 1e-300;
        auto H = build_two_qubit_model(weak, drive2);
        const Matrix h = H.evaluate(0.123).matrix();
        const Matrix hs = H.static_part();
        CHECK((h - hs).cwiseAbs().maxCoeff() < 1e-250);
    }
    SUBCASE("lambda = delta is rejected") {
        DeviceConfig bad = dev;
        bad.lambda = bad.delta_small;
        CHECK_THROWS_AS(build_two_qubit_model(bad, drive2), std::invalid_argument);
    }
    SUBCASE("drive frequency must be 2 delta") {
        DriveParams wrong{0.77 * delta, delta, 0.0};
        CHECK_THROWS_AS(build_two_qubit_model(dev, wrong), std::invalid_argument);
    }
    SUBCASE("total excitation conserved at all times") {
        auto H = build_two_qubit_model(dev, drive2, /*include_j2=*/true);
        const QOperator n = excitation_number(H.space());
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> tdist(0.0, 150.0);
        for (int i = 0; i < 5; ++i)
            CHECK(commutator(H.evaluate(tdist(rng)), n).matrix().cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("evaluate Hermitian at 20 random times") {
        auto H = build_two_qubit_model(dev, drive2, true);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> tdist(0.0, 150.0);
        for (int i = 0; i < 20; ++i)
            CHECK(H.evaluate(tdist(rng)).hermiticity_defect() <= 1e-12);
    }
    SUBCASE("coupling_on = false drops the whole interaction") {
        DeviceConfig off = dev;
        off.coupling_on = false;
        auto H = build_two_qubit_model(off, drive2);
        CHECK(H.empty());
    }
}

TEST_CASE("effective two-qubit Hamiltonian") {
    DeviceConfig dev = paper_double_device();

    SUBCASE("eta = 2 g^2 / (3 delta) for lambda = 2 delta") {
        const double eta = effective_coupling_eta(dev);
        CHECK(eta == doctest::Approx(2 * dev.g * dev.g / (3 * dev.delta_small)));
        CHECK(eta == doctest::Approx(2 * kPi * 0.004).epsilon(1e-9));
    }
    SUBCASE("beta = 0 leaves only the sigma2-sigma4 exchange channel") {
        auto H = effective_two_qubit_hamiltonian(dev, 0.0, 0.0);
        const auto space = H.space();
        const Matrix h = H.evaluate(0.0).matrix();
        const auto a1 = basis_ket(space, {1, 1, 0, 0, 0, 0});
        const auto k00 = basis_ket(space, {1, 0, 0, 1, 0, 0});
        const auto k01 = basis_ket(space, {1, 0, 0, 0, 1, 0});
        CHECK(std::abs(a1.vector().dot(h * k00.vector())) < 1e-15); // J1(0) = 0
        CHECK(std::abs(a1.vector().dot(h * k01.vector()) + effective_coupling_eta(dev)) <
              1e-12); // -eta J0(0)
    }
    SUBCASE("static Hamiltonian") {
        auto H = effective_two_qubit_hamiltonian(dev, 0.77, 0.3);
        CHECK(H.max_frequency() == 0.0);
        CHECK(H.evaluate(13.7).hermiticity_defect() <= 1e-12);
    }
}

TEST_CASE("harmonic term sum contract") {
    HilbertSpace s({{"q", 2}});
    Matrix sig(2, 2);
    sig << 0, 1, 0, 0;
    HarmonicTermSum H(s);
    SUBCASE("single resonant term evaluates to sigma_x") {
        H.add(QOperator(s, sig), 1.0, 0.0);
        Matrix sx(2, 2);
        sx << 0, 1, 1, 0;
        CHECK((H.evaluate(0.93).matrix() - sx).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("harmonic term at nu = pi flips sign at t = 1") {
        H.add(QOperator(s, sig), 1.0, kPi);
        Matrix sx(2, 2);
        sx << 0, 1, 1, 0;
        CHECK((H.evaluate(1.0).matrix() + sx).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("non-Hermitian static term without h.c. is rejected") {
        CHECK_THROWS_AS(H.add(QOperator(s, sig), 1.0, 0.0, /*include_hc=*/false),
                        std::invalid_argument);
        CHECK_THROWS_AS(H.add(QOperator(s, Matrix(sig + sig.adjoint())), 1.0, 2.0, false),
                        std::invalid_argument);
    }
}
