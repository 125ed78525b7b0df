#include "holosim/lindblad.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "holosim/errors.hpp"

namespace holosim {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr int kSampleIntervals = 500;
constexpr int kPositivityStride = 25; // positivity checked every 25th sample
constexpr int kReunitarizeEvery = 1000;

double trace_product_real(const Matrix& op, const Matrix& rho) {
    return op.cwiseProduct(rho.transpose()).sum().real();
}

// Hamiltonian assembly split into a static part and dynamic harmonics with
// pre-scaled matrices; this is the hot path of every propagation.
struct HamiltonianPlan {
    Matrix static_part;
    struct Harmonic {
        Matrix m;     // amplitude * op
        Matrix m_dag; // its adjoint
        double nu;
    };
    std::vector<Harmonic> harmonics;

    explicit HamiltonianPlan(const HarmonicTermSum& H) {
        const int n = H.space().total_dim();
        static_part = Matrix::Zero(n, n);
        for (const auto& term : H.terms()) {
            if (term.angular_frequency == 0.0) {
                static_part += term.amplitude * term.op.matrix();
                if (term.include_hc)
                    static_part += (term.amplitude * term.op.matrix()).adjoint().eval();
            } else {
                Matrix m = term.amplitude * term.op.matrix();
                Matrix md = m.adjoint();
                harmonics.push_back({std::move(m), std::move(md), term.angular_frequency});
            }
        }
    }

    void assemble(double t, Matrix& out) const {
        out = static_part;
        for (const auto& h : harmonics) {
            const Complex c = std::exp(Complex(0, h.nu * t));
            out += c * h.m;
            out += std::conj(c) * h.m_dag;
        }
    }
};

struct MasterPlan {
    HamiltonianPlan ham;
    Matrix damp; // sum_k rate_k op_k^dag op_k
    std::vector<Matrix> jump, jump_dag;
    std::vector<double> two_rate;
    mutable Matrix ht, gen, tmp;

    MasterPlan(const HarmonicTermSum& H, const CollapseSet& collapse) : ham(H) {
        const int n = H.space().total_dim();
        damp = Matrix::Zero(n, n);
        for (const auto& c : collapse) {
            if (c.rate == 0.0) continue;
            damp += c.rate * (c.op.matrix().adjoint() * c.op.matrix());
            jump.push_back(c.op.matrix());
            jump_dag.push_back(c.op.matrix().adjoint());
            two_rate.push_back(2.0 * c.rate);
        }
        ht.resize(n, n);
        gen.resize(n, n);
        tmp.resize(n, n);
    }

    // out = M rho + rho M^dag + sum_k 2 rate_k A_k rho A_k^dag,
    // M = -i H(t) - sum_k rate_k A_k^dag A_k
    void rhs(double t, const Matrix& rho, Matrix& out) const {
        ham.assemble(t, ht);
        gen = Complex(0, -1) * ht;
        gen -= damp;
        out.noalias() = gen * rho;
        out.noalias() += rho * gen.adjoint();
        for (size_t k = 0; k < jump.size(); ++k) {
            tmp.noalias() = jump[k] * rho;
            out.noalias() += two_rate[k] * (tmp * jump_dag[k]);
        }
    }
};

template <typename Rhs>
void rk4_step(const Rhs& rhs, double t, double h, Matrix& y, Matrix& k1, Matrix& k2, Matrix& k3,
              Matrix& k4, Matrix& ytmp) {
    rhs(t, y, k1);
    ytmp = y + (h / 2) * k1;
    rhs(t + h / 2, ytmp, k2);
    ytmp = y + (h / 2) * k2;
    rhs(t + h / 2, ytmp, k3);
    ytmp = y + h * k3;
    rhs(t + h, ytmp, k4);
    y += (h / 6) * k1;
    y += (h / 3) * k2;
    y += (h / 3) * k3;
    y += (h / 6) * k4;
}

Matrix local_sigma_z(int d) {
    Matrix z = Matrix::Zero(d, d);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0; // levels above the qubit subspace untouched
    return z;
}

void require_labels(const HilbertSpace& space, const std::vector<std::string>& labels,
                    const char* what) {
    if (space.subsystem_count() != static_cast<int>(labels.size()))
        throw std::invalid_argument(std::string(what) + ": expected space with " +
                                    std::to_string(labels.size()) + " subsystems, got " +
                                    space.describe());
    for (const auto& l : labels)
        if (!space.has_label(l))
            throw std::invalid_argument(std::string(what) + ": space " + space.describe() +
                                        " lacks subsystem '" + l + "'");
}

void polar_project(Matrix& u) {
    Eigen::BDCSVD<Matrix> svd(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u.noalias() = svd.matrixU() * svd.matrixV().adjoint();
}

} // namespace

void NoiseParams::validate() const {
    if (kappa < 0 || gamma1 < 0 || gamma2 < 0)
        throw std::invalid_argument("NoiseParams: rates must be non-negative");
}

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix m)
    : space_(std::move(space)), m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() != space_.total_dim())
        throw std::invalid_argument("DensityMatrix: dimension does not match space");
    if (!(trace_defect() <= 1e-8))
        throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                    std::to_string(trace_defect()));
    if (!(hermiticity_defect() <= 1e-10))
        throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
    if (!(min_eigenvalue() >= -1e-8))
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                    std::to_string(min_eigenvalue()));
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return {psi.space(), psi.vector() * psi.vector().adjoint()};
}

double DensityMatrix::trace_defect() const { return std::abs(m_.trace() - Complex(1, 0)); }

double DensityMatrix::hermiticity_defect() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

const std::vector<double>& SimulationTrace::series_for(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return series[i];
    throw std::invalid_argument("SimulationTrace: no series labelled '" + label + "'");
}

CollapseSet collapse_set_single(const HilbertSpace& space, const NoiseParams& noise) {
    noise.validate();
    require_labels(space, {"q1", "q2", "c"}, "collapse_set_single");
    CollapseSet set;
    if (noise.kappa > 0) set.push_back({annihilation(space, "c"), noise.kappa / 2});
    if (noise.gamma1 > 0)
        set.push_back({transmon_lowering(space, "q1", 1) + transmon_lowering(space, "q2", 1),
                       noise.gamma1 / 2});
    if (noise.gamma2 > 0)
        set.push_back({embed(space, "q1", local_sigma_z(space.dim("q1"))) +
                           embed(space, "q2", local_sigma_z(space.dim("q2"))),
                       noise.gamma2 / 2});
    return set;
}

CollapseSet collapse_set_double(const HilbertSpace& space, const NoiseParams& noise) {
    noise.validate();
    require_labels(space, {"q1", "q2", "c1", "q3", "q4", "c2"}, "collapse_set_double");
    CollapseSet set;
    for (const char* cav : {"c1", "c2"})
        if (noise.kappa > 0) set.push_back({annihilation(space, cav), noise.kappa / 2});
    for (const auto& [qa, qb] : {std::pair{"q1", "q2"}, std::pair{"q3", "q4"}}) {
        if (noise.gamma1 > 0)
            set.push_back({transmon_lowering(space, qa, 1) + transmon_lowering(space, qb, 1),
                           noise.gamma1 / 2});
        if (noise.gamma2 > 0)
            set.push_back({embed(space, qa, local_sigma_z(space.dim(qa))) +
                               embed(space, qb, local_sigma_z(space.dim(qb))),
                           noise.gamma2 / 2});
    }
    return set;
}

double default_step(const HarmonicTermSum& H, double t_final) {
    const double by_samples = t_final / 2000.0;
    const double nu = H.max_frequency();
    if (nu <= 0.0) return by_samples;
    return std::min(kTwoPi / (40.0 * nu), by_samples);
}

SimulationTrace propagate_master(const HarmonicTermSum& H, const CollapseSet& collapse,
                                 const DensityMatrix& rho0, double t_final,
                                 const std::vector<Observable>& record,
                                 std::optional<double> dt) {
    if (t_final <= 0) throw std::invalid_argument("propagate_master: t_final must be positive");
    if (rho0.space() != H.space())
        throw std::invalid_argument("propagate_master: initial state space mismatch");
    for (const auto& c : collapse)
        if (c.op.space() != H.space())
            throw std::invalid_argument("propagate_master: collapse operator space mismatch");
    for (const auto& o : record)
        if (o.op.space() != H.space())
            throw std::invalid_argument("propagate_master: observable space mismatch");
    const double dt_req = dt.value_or(default_step(H, t_final));
    if (dt_req <= 0) throw NumericalError("propagate_master: step size must be positive");

    const long per_sample =
        std::max<long>(1, static_cast<long>(std::ceil(t_final / kSampleIntervals / dt_req)));
    const long n_steps = per_sample * kSampleIntervals;
    const double h = t_final / static_cast<double>(n_steps);

    MasterPlan plan(H, collapse);
    const int n = H.space().total_dim();
    Matrix rho = rho0.matrix();
    Matrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), ytmp(n, n);

    SimulationTrace trace;
    trace.dt = h;
    trace.steps = n_steps;
    trace.labels.reserve(record.size());
    for (const auto& o : record) trace.labels.push_back(o.label);
    trace.series.assign(record.size(), {});
    trace.min_eigenvalue = 0.0;

    bool positivity_checked = false;
    auto sample = [&](long sample_index, double t) {
        trace.times.push_back(t);
        for (size_t i = 0; i < record.size(); ++i)
            trace.series[i].push_back(trace_product_real(record[i].op.matrix(), rho));
        const double tr_defect = std::abs(rho.trace() - Complex(1, 0));
        trace.trace_drift = std::max(trace.trace_drift, tr_defect);
        if (!(tr_defect <= 1e-6)) {
            std::ostringstream os;
            os << "propagate_master: trace drift " << tr_defect << " at t = " << t
               << " ns exceeds 1e-6 (dt = " << h << " ns)";
            throw NumericalError(os.str());
        }
        trace.hermiticity_defect = std::max(trace.hermiticity_defect,
                                            (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        if (sample_index % kPositivityStride == 0 || sample_index == kSampleIntervals) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues().minCoeff();
            if (!positivity_checked || lo < trace.min_eigenvalue) trace.min_eigenvalue = lo;
            positivity_checked = true;
        }
    };

    auto rhs = [&plan](double t, const Matrix& y, Matrix& out) { plan.rhs(t, y, out); };

    sample(0, 0.0);
    long done = 0;
    for (long s = 1; s <= kSampleIntervals; ++s) {
        for (long k = 0; k < per_sample; ++k, ++done)
            rk4_step(rhs, static_cast<double>(done) * h, h, rho, k1, k2, k3, k4, ytmp);
        sample(s, static_cast<double>(done) * h);
    }

    trace.final_state = DensityMatrix(H.space(), rho);
    return trace;
}

QOperator propagate_unitary(const HarmonicTermSum& H, double t_final, std::optional<double> dt) {
    if (t_final <= 0) throw std::invalid_argument("propagate_unitary: t_final must be positive");
    const double dt_req = dt.value_or(default_step(H, t_final));
    if (dt_req <= 0) throw NumericalError("propagate_unitary: step size must be positive");
    const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(t_final / dt_req)));
    const double h = t_final / static_cast<double>(n_steps);

    HamiltonianPlan plan(H);
    const int n = H.space().total_dim();
    Matrix ht(n, n);
    auto rhs = [&](double t, const Matrix& y, Matrix& out) {
        plan.assemble(t, ht);
        out.noalias() = Complex(0, -1) * (ht * y);
    };

    Matrix u = Matrix::Identity(n, n);
    Matrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), ytmp(n, n);
    for (long s = 0; s < n_steps; ++s) {
        rk4_step(rhs, static_cast<double>(s) * h, h, u, k1, k2, k3, k4, ytmp);
        if ((s + 1) % kReunitarizeEvery == 0) polar_project(u);
    }
    const double defect = (u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > 1e-9)
        throw NumericalError("propagate_unitary: unitarity defect " + std::to_string(defect) +
                             " exceeds 1e-9");
    return {H.space(), std::move(u)};
}

Matrix propagate_columns(const HarmonicTermSum& H, Matrix Y, double t0, double T, double h) {
    if (h <= 0) throw NumericalError("propagate_columns: step size must be positive");
    const long n_steps = std::llround(T / h);
    if (n_steps < 0 || std::abs(n_steps * h - T) > 1e-9 * std::max(1.0, std::abs(T)))
        throw std::invalid_argument("propagate_columns: T must be an integral number of steps");
    HamiltonianPlan plan(H);
    const int n = H.space().total_dim();
    Matrix ht(n, n);
    auto rhs = [&](double t, const Matrix& y, Matrix& out) {
        plan.assemble(t, ht);
        out.noalias() = Complex(0, -1) * (ht * y);
    };
    Matrix k1, k2, k3, k4, ytmp;
    for (long s = 0; s < n_steps; ++s)
        rk4_step(rhs, t0 + static_cast<double>(s) * h, h, Y, k1, k2, k3, k4, ytmp);
    return Y;
}

} // namespace holosim
