#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holosim/model.hpp"
#include "holosim/operators.hpp"

namespace holosim {

/// Decay and dephasing rates in rad/ns.
struct NoiseParams {
    double kappa = 0.0;  // cavity decay, per cavity
    double gamma1 = 0.0; // transmon decay
    double gamma2 = 0.0; // transmon dephasing

    void validate() const;
    bool all_zero() const { return kappa == 0 && gamma1 == 0 && gamma2 == 0; }
};

/// One dissipator rate * L(op) with L(A) = 2 A rho A^dag - A^dag A rho - rho A^dag A.
struct Collapse {
    QOperator op;
    double rate;
};
using CollapseSet = std::vector<Collapse>;

/// Hermitian, unit-trace, positive-semidefinite state.
class DensityMatrix {
public:
    DensityMatrix() = default;
    DensityMatrix(HilbertSpace space, Matrix m);
    static DensityMatrix pure(const StateVector& psi);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    double trace_defect() const;
    double hermiticity_defect() const;
    double min_eigenvalue() const;

private:
    HilbertSpace space_;
    Matrix m_;
};

/// Named real observable Re tr(op rho) recorded along a trajectory.
struct Observable {
    std::string label;
    QOperator op;
};

struct SimulationTrace {
    std::vector<double> times; // ns, strictly increasing, includes t = 0
    std::vector<std::string> labels;
    std::vector<std::vector<double>> series; // series[i] belongs to labels[i]
    DensityMatrix final_state;
    double trace_drift = 0.0;        // max |tr rho - 1| over sample times
    double hermiticity_defect = 0.0; // max over sample times
    double min_eigenvalue = 0.0;     // worst over positivity checks
    double dt = 0.0;
    long steps = 0;

    const std::vector<double>& series_for(const std::string& label) const;
};

/// Dissipators of the single-logical-qubit block {q1, q2, c}:
/// (kappa/2) L(a), (Gamma1/2) L(sigma1+sigma2), (Gamma2/2) L(sigma1^z+sigma2^z).
/// On 3-level transmons sigma and sigma^z act on the qubit subspace and as
/// zero on level |2>.
CollapseSet collapse_set_single(const HilbertSpace& space, const NoiseParams& noise);

/// Per-cavity copy of the single-qubit dissipators on {q1,q2,c1,q3,q4,c2}.
CollapseSet collapse_set_double(const HilbertSpace& space, const NoiseParams& noise);

/// Default integrator step: min(2 pi / (40 max_frequency), t_final / 2000).
double default_step(const HarmonicTermSum& H, double t_final);

/// Integrate d rho/dt = -i[H(t), rho] + sum_k rate_k L(op_k)(rho) with fixed-step
/// classical RK4 acting directly on the density matrix. Observables are recorded
/// at >= 500 evenly spaced sample times; trace drift beyond 1e-6 aborts.
SimulationTrace propagate_master(const HarmonicTermSum& H, const CollapseSet& collapse,
                                 const DensityMatrix& rho0, double t_final,
                                 const std::vector<Observable>& record,
                                 std::optional<double> dt = std::nullopt);

/// Time-ordered propagator U(t_final) of dU/dt = -i H(t) U, RK4 with polar
/// re-unitarization every 1000 steps; the returned defect ||U^dag U - I||_max
/// must not exceed 1e-9.
QOperator propagate_unitary(const HarmonicTermSum& H, double t_final,
                            std::optional<double> dt = std::nullopt);

/// Evolve the columns of Y under dpsi/dt = -i H(t) psi from t0 over duration T
/// with fixed step h (T must be an integral number of steps within rounding).
/// Building block for gate-time refinement and the parallel-transport check.
Matrix propagate_columns(const HarmonicTermSum& H, Matrix Y, double t0, double T, double h);

} // namespace holosim
