#include "holosim/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace holosim {

namespace {

void require_same_space(const QOperator& a, const QOperator& b, const char* what) {
    if (a.space() != b.space())
        throw std::invalid_argument(std::string(what) + ": operands live on different spaces " +
                                    a.space().describe() + " vs " + b.space().describe());
}

} // namespace

QOperator::QOperator(HilbertSpace space, Matrix m) : space_(std::move(space)), m_(std::move(m)) {
    if (m_.rows() != m_.cols())
        throw std::invalid_argument("QOperator: matrix must be square");
    if (m_.rows() != space_.total_dim())
        throw std::invalid_argument("QOperator: matrix dimension " + std::to_string(m_.rows()) +
                                    " does not match space " + space_.describe());
}

double QOperator::hermiticity_defect() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

StateVector::StateVector(HilbertSpace space, CVector v)
    : space_(std::move(space)), v_(std::move(v)) {
    if (v_.size() != space_.total_dim())
        throw std::invalid_argument("StateVector: dimension does not match space " +
                                    space_.describe());
    const double n = v_.norm();
    if (std::abs(n - 1.0) > 1e-8)
        throw std::invalid_argument("StateVector: norm deviates from 1 by " +
                                    std::to_string(std::abs(n - 1.0)));
}

QOperator identity_op(const HilbertSpace& space) {
    return {space, Matrix::Identity(space.total_dim(), space.total_dim())};
}

QOperator embed(const HilbertSpace& space, const std::string& label, const Matrix& local) {
    const int slot = space.index_of(label);
    const int d = space.dim(slot);
    if (local.rows() != local.cols() || local.rows() != d)
        throw std::invalid_argument("embed: local matrix is " + std::to_string(local.rows()) +
                                    "x" + std::to_string(local.cols()) + " but subsystem '" +
                                    label + "' has dimension " + std::to_string(d));
    const int pre = space.dim_before(slot);
    const int post = space.dim_after(slot);
    Matrix full = Matrix::Zero(space.total_dim(), space.total_dim());
    for (int p = 0; p < pre; ++p)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (local(i, j) == Complex(0, 0)) continue;
                for (int q = 0; q < post; ++q)
                    full((p * d + i) * post + q, (p * d + j) * post + q) = local(i, j);
            }
    return {space, std::move(full)};
}

QOperator annihilation(const HilbertSpace& space, const std::string& cavity_label) {
    const int d = space.dim(cavity_label);
    if (d < 2)
        throw std::invalid_argument("annihilation: subsystem '" + cavity_label +
                                    "' has dimension < 2");
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return embed(space, cavity_label, a);
}

QOperator transmon_lowering(const HilbertSpace& space, const std::string& transmon_label,
                            int from_level) {
    if (from_level != 1 && from_level != 2)
        throw std::invalid_argument("transmon_lowering: from_level must be 1 or 2");
    const int d = space.dim(transmon_label);
    if (d < from_level + 1)
        throw std::invalid_argument("transmon_lowering: level " + std::to_string(from_level) +
                                    " out of range for subsystem '" + transmon_label +
                                    "' of dimension " + std::to_string(d));
    Matrix sig = Matrix::Zero(d, d);
    sig(from_level - 1, from_level) = 1.0;
    return embed(space, transmon_label, sig);
}

StateVector basis_ket(const HilbertSpace& space, const std::vector<int>& occupations) {
    if (static_cast<int>(occupations.size()) != space.subsystem_count())
        throw std::invalid_argument("basis_ket: expected one occupation per subsystem");
    int index = 0;
    for (int k = 0; k < space.subsystem_count(); ++k) {
        const int occ = occupations[static_cast<size_t>(k)];
        if (occ < 0 || occ >= space.dim(k))
            throw std::invalid_argument("basis_ket: occupation " + std::to_string(occ) +
                                        " out of range for subsystem '" + space.label(k) + "'");
        index = index * space.dim(k) + occ;
    }
    CVector v = CVector::Zero(space.total_dim());
    v(index) = 1.0;
    return {space, std::move(v)};
}

QOperator dagger(const QOperator& a) { return a.dagger(); }

QOperator commutator(const QOperator& a, const QOperator& b) {
    require_same_space(a, b, "commutator");
    return {a.space(), a.matrix() * b.matrix() - b.matrix() * a.matrix()};
}

QOperator operator*(const QOperator& a, const QOperator& b) {
    require_same_space(a, b, "operator*");
    return {a.space(), a.matrix() * b.matrix()};
}

QOperator operator+(const QOperator& a, const QOperator& b) {
    require_same_space(a, b, "operator+");
    return {a.space(), a.matrix() + b.matrix()};
}

QOperator operator-(const QOperator& a, const QOperator& b) {
    require_same_space(a, b, "operator-");
    return {a.space(), a.matrix() - b.matrix()};
}

QOperator operator*(Complex c, const QOperator& a) { return {a.space(), c * a.matrix()}; }
QOperator operator*(double c, const QOperator& a) { return {a.space(), c * a.matrix()}; }

EigenDecomposition hermitian_eigendecomposition(const QOperator& a, double tol) {
    const double defect = a.hermiticity_defect();
    if (defect > tol)
        throw std::invalid_argument("hermitian_eigendecomposition: input deviates from "
                                    "Hermiticity by " + std::to_string(defect));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigendecomposition: solver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Complex inner_product(const StateVector& bra, const StateVector& ket) {
    if (bra.space() != ket.space())
        throw std::invalid_argument("inner_product: states live on different spaces");
    return bra.vector().dot(ket.vector());
}

Complex matrix_element(const StateVector& bra, const QOperator& op, const StateVector& ket) {
    if (bra.space() != op.space() || ket.space() != op.space())
        throw std::invalid_argument("matrix_element: space mismatch");
    return bra.vector().dot(op.matrix() * ket.vector());
}

} // namespace holosim
