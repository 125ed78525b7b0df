#include <doctest.h>

#include <complex>
#include <random>

#include "holosim/operators.hpp"

using namespace holosim;

namespace {

HilbertSpace qc_space() { return HilbertSpace({{"q", 2}, {"c", 2}}); }

Matrix random_hermitian(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(dist(rng), dist(rng));
    return 0.5 * (m + Matrix(m.adjoint()));
}

} // namespace

TEST_CASE("HilbertSpace bookkeeping") {
    HilbertSpace s({{"q1", 2}, {"q2", 3}, {"c", 4}});
    CHECK(s.total_dim() == 24);
    CHECK(s.dim("q2") == 3);
    CHECK(s.index_of("c") == 2);
    CHECK(s.dim_before(2) == 6);
    CHECK(s.dim_after(0) == 12);
    CHECK_THROWS_AS(s.index_of("nope"), std::invalid_argument);
    CHECK_THROWS_AS(HilbertSpace({{"a", 2}, {"a", 2}}), std::invalid_argument);
    CHECK_THROWS_AS(HilbertSpace({{"a", 0}}), std::invalid_argument);
}

TEST_CASE("annihilation operator") {
    SUBCASE("two-level cavity is the qubit lowering matrix") {
        HilbertSpace s({{"c", 2}});
        Matrix a = annihilation(s, "c").matrix();
        CHECK(a(0, 1) == Complex(1, 0));
        CHECK(a(0, 0) == Complex(0, 0));
        CHECK(a(1, 0) == Complex(0, 0));
        CHECK(a(1, 1) == Complex(0, 0));
    }
    SUBCASE("a|2> = sqrt(2)|1>") {
        HilbertSpace s({{"c", 3}});
        Matrix a = annihilation(s, "c").matrix();
        CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    }
    SUBCASE("embedding by identity on {q:2, c:2}") {
        auto a = annihilation(qc_space(), "c").matrix();
        Matrix expect = Matrix::Zero(4, 4);
        expect(0, 1) = 1;
        expect(2, 3) = 1; // I_2 (x) [[0,1],[0,0]]
        CHECK((a - expect).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(annihilation(qc_space(), "nope"), std::invalid_argument);
        HilbertSpace s({{"c", 1}});
        CHECK_THROWS_AS(annihilation(s, "c"), std::invalid_argument);
    }
}

TEST_CASE("transmon lowering operator") {
    SUBCASE("qubit sigma") {
        HilbertSpace s({{"q", 2}});
        Matrix sig = transmon_lowering(s, "q", 1).matrix();
        CHECK(sig(0, 1) == Complex(1, 0));
        CHECK(sig.cwiseAbs().sum() == 1.0);
    }
    SUBCASE("|1><2| on a 3-level transmon") {
        HilbertSpace s({{"q", 3}});
        Matrix sig = transmon_lowering(s, "q", 2).matrix();
        CHECK(sig(1, 2) == Complex(1, 0));
        CHECK(sig.cwiseAbs().sum() == 1.0);
    }
    SUBCASE("level out of range") {
        HilbertSpace s({{"q", 2}});
        CHECK_THROWS_AS(transmon_lowering(s, "q", 2), std::invalid_argument);
        CHECK_THROWS_AS(transmon_lowering(s, "q", 3), std::invalid_argument);
    }
}

TEST_CASE("embed") {
    HilbertSpace s({{"q1", 2}, {"q2", 2}});
    Matrix sz(2, 2);
    sz << 1, 0, 0, -1;
    SUBCASE("first-listed subsystem varies slowest") {
        Matrix full = embed(s, "q1", sz).matrix();
        CVector diag = full.diagonal();
        CHECK(diag(0) == Complex(1, 0));
        CHECK(diag(1) == Complex(1, 0));
        CHECK(diag(2) == Complex(-1, 0));
        CHECK(diag(3) == Complex(-1, 0));
    }
    SUBCASE("identity embeds to identity") {
        Matrix full = embed(s, "q2", Matrix::Identity(2, 2)).matrix();
        CHECK((full - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(embed(s, "q1", Matrix::Identity(3, 3)), std::invalid_argument);
    }
    SUBCASE("embed is multiplicative on one slot and commutes across slots") {
        Matrix sx(2, 2), sy(2, 2);
        sx << 0, 1, 1, 0;
        sy << 0, Complex(0, -1), Complex(0, 1), 0;
        QOperator a = embed(s, "q1", sx), b = embed(s, "q1", sy);
        QOperator ab = embed(s, "q1", Matrix(sx * sy));
        CHECK(((a * b).matrix() - ab.matrix()).cwiseAbs().maxCoeff() < 1e-15);
        QOperator c = embed(s, "q2", sy);
        CHECK(commutator(a, c).matrix().cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("basis kets of the single-logical-qubit space") {
    HilbertSpace s({{"q1", 2}, {"q2", 2}, {"c", 2}});
    const StateVector zero_L = basis_ket(s, {1, 0, 0});
    const StateVector one_L = basis_ket(s, {0, 1, 0});
    const StateVector e_L = basis_ket(s, {0, 0, 1});
    CHECK(zero_L.vector()(4) == Complex(1, 0)); // q1 slowest
    CHECK(one_L.vector()(2) == Complex(1, 0));
    CHECK(e_L.vector()(1) == Complex(1, 0));
    CHECK_THROWS_AS(basis_ket(s, {0, 0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(basis_ket(s, {0, 0}), std::invalid_argument);

    // orthonormality
    for (const auto* a : {&zero_L, &one_L, &e_L})
        for (const auto* b : {&zero_L, &one_L, &e_L}) {
            const Complex ip = inner_product(*a, *b);
            CHECK(std::abs(ip - (a == b ? Complex(1, 0) : Complex(0, 0))) < 1e-12);
        }
}

TEST_CASE("operator algebra") {
    HilbertSpace s({{"c", 3}});
    const QOperator a = annihilation(s, "c");
    const QOperator adag = dagger(a);

    SUBCASE("dagger of a is creation") {
        CHECK(std::abs(adag.matrix()(1, 0) - Complex(1, 0)) < 1e-15);
        CHECK(std::abs(adag.matrix()(2, 1) - std::sqrt(2.0)) < 1e-15);
    }
    SUBCASE("dagger is an exact involution") {
        CHECK((dagger(dagger(a)).matrix() - a.matrix()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("commutator of an operator with itself vanishes") {
        HilbertSpace q({{"q", 2}});
        Matrix sz(2, 2);
        sz << 1, 0, 0, -1;
        QOperator z = embed(q, "q", sz);
        CHECK(commutator(z, z).matrix().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("truncation shows up in [a, adag]") {
        // direct 3x3 computation: diag(1, 1, -2) for n_max = 2
        Matrix c = commutator(a, adag).matrix();
        CHECK(c(0, 0).real() == doctest::Approx(1.0));
        CHECK(c(1, 1).real() == doctest::Approx(1.0));
        CHECK(c(2, 2).real() == doctest::Approx(-2.0));
    }
    SUBCASE("space mismatch rejected") {
        HilbertSpace other({{"c", 4}});
        CHECK_THROWS_AS(a + annihilation(other, "c"), std::invalid_argument);
    }
    SUBCASE("lowering operators are nilpotent on two-level subsystems") {
        QOperator sig = transmon_lowering(qc_space(), "q", 1);
        CHECK((sig * sig).matrix().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("hermitian eigendecomposition") {
    SUBCASE("diagonal matrix sorted ascending") {
        HilbertSpace s({{"c", 2}});
        Matrix d(2, 2);
        d << 2, 0, 0, 1;
        auto eig = hermitian_eigendecomposition(QOperator(s, d));
        CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
        CHECK(eig.eigenvalues(1) == doctest::Approx(2.0));
    }
    SUBCASE("sigma_x spectrum") {
        HilbertSpace s({{"q", 2}});
        Matrix sx(2, 2);
        sx << 0, 1, 1, 0;
        auto eig = hermitian_eigendecomposition(QOperator(s, sx));
        CHECK(eig.eigenvalues(0) == doctest::Approx(-1.0));
        CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
    }
    SUBCASE("random 5x5 reconstruction") {
        HilbertSpace s({{"x", 5}});
        Matrix m = random_hermitian(5, 20260809);
        auto eig = hermitian_eigendecomposition(QOperator(s, m));
        Matrix rebuilt = eig.eigenvectors * eig.eigenvalues.asDiagonal().toDenseMatrix() *
                         eig.eigenvectors.adjoint();
        CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-9 * 5);
    }
    SUBCASE("non-Hermitian input rejected") {
        HilbertSpace s({{"c", 2}});
        Matrix bad(2, 2);
        bad << 0, 1, 0, 0;
        CHECK_THROWS_AS(hermitian_eigendecomposition(QOperator(s, bad)),
                        std::invalid_argument);
    }
}

TEST_CASE("state vector norm guard") {
    HilbertSpace s({{"q", 2}});
    CVector bad(2);
    bad << 0.5, 0.5;
    CHECK_THROWS_AS(StateVector(s, bad), std::invalid_argument);
}
