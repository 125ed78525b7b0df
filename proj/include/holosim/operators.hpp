#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "holosim/hilbert.hpp"

namespace holosim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Dense complex operator tagged with the tensor-product space it acts on.
class QOperator {
public:
    QOperator() = default;
    QOperator(HilbertSpace space, Matrix m);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return m_; }
    Matrix& matrix() { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    QOperator dagger() const { return {space_, m_.adjoint()}; }
    double hermiticity_defect() const;

private:
    HilbertSpace space_;
    Matrix m_;
};

/// Normalized state in a tagged space. Construction checks |norm - 1| <= 1e-8.
class StateVector {
public:
    StateVector() = default;
    StateVector(HilbertSpace space, CVector v);

    const HilbertSpace& space() const { return space_; }
    const CVector& vector() const { return v_; }
    int dim() const { return static_cast<int>(v_.size()); }

private:
    HilbertSpace space_;
    CVector v_;
};

QOperator identity_op(const HilbertSpace& space);

/// I x ... x local x ... x I with the labelled subsystem in the fixed tensor order.
QOperator embed(const HilbertSpace& space, const std::string& label, const Matrix& local);

/// Truncated Fock lowering operator of the labelled cavity: a|n> = sqrt(n)|n-1>.
QOperator annihilation(const HilbertSpace& space, const std::string& cavity_label);

/// |from_level-1><from_level| of the labelled transmon; from_level=1 is the
/// qubit sigma, from_level=2 the |1><2| leakage operator.
QOperator transmon_lowering(const HilbertSpace& space, const std::string& transmon_label,
                            int from_level);

/// Computational basis ket for one occupation number per subsystem.
StateVector basis_ket(const HilbertSpace& space, const std::vector<int>& occupations);

QOperator dagger(const QOperator& a);
QOperator commutator(const QOperator& a, const QOperator& b);

QOperator operator*(const QOperator& a, const QOperator& b);
QOperator operator+(const QOperator& a, const QOperator& b);
QOperator operator-(const QOperator& a, const QOperator& b);
QOperator operator*(Complex c, const QOperator& a);
QOperator operator*(double c, const QOperator& a);

struct EigenDecomposition {
    RVector eigenvalues; // ascending
    Matrix eigenvectors; // columns
};

/// Eigendecomposition of a Hermitian operator; throws if the input deviates
/// from Hermiticity by more than `tol`.
EigenDecomposition hermitian_eigendecomposition(const QOperator& a, double tol = 1e-9);

Complex inner_product(const StateVector& bra, const StateVector& ket);
Complex matrix_element(const StateVector& bra, const QOperator& op, const StateVector& ket);

} // namespace holosim
