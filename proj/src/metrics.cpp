#include "holosim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holosim {

StateVector embed_logical_state(const DfsBasis& dfs, const CVector& logical_amplitudes) {
    if (logical_amplitudes.size() != dfs.computational_count)
        throw std::invalid_argument("embed_logical_state: expected " +
                                    std::to_string(dfs.computational_count) + " amplitudes");
    if (std::abs(logical_amplitudes.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("embed_logical_state: amplitudes not normalized");
    CVector v = CVector::Zero(dfs.space.total_dim());
    for (int i = 0; i < dfs.computational_count; ++i)
        v += logical_amplitudes(i) * dfs.kets[static_cast<size_t>(i)].vector();
    return {dfs.space, std::move(v)};
}

double state_fidelity(const DensityMatrix& rho, const StateVector& target) {
    if (rho.space() != target.space())
        throw std::invalid_argument("state_fidelity: space mismatch");
    const double f = target.vector().dot(rho.matrix() * target.vector()).real();
    if (f < -1e-6 || f > 1 + 1e-6)
        throw std::invalid_argument("state_fidelity: overlap " + std::to_string(f) +
                                    " outside [0, 1] beyond tolerance");
    return std::clamp(f, 0.0, 1.0);
}

std::vector<std::pair<std::string, double>> populations(const DensityMatrix& rho,
                                                        const DfsBasis& dfs) {
    if (rho.space() != dfs.space)
        throw std::invalid_argument("populations: space mismatch");
    std::vector<std::pair<std::string, double>> pops;
    double total = 0.0;
    for (size_t i = 0; i < dfs.kets.size(); ++i) {
        const CVector& k = dfs.kets[i].vector();
        const double p = k.dot(rho.matrix() * k).real();
        pops.emplace_back(dfs.labels[i], p);
        total += p;
    }
    pops.emplace_back("residual", rho.matrix().trace().real() - total);
    return pops;
}

double gate_fidelity(const Matrix& achieved, const Matrix& target) {
    if (achieved.rows() != achieved.cols() || target.rows() != target.cols() ||
        achieved.rows() != target.rows())
        throw std::invalid_argument("gate_fidelity: dimension mismatch");
    const double d = static_cast<double>(achieved.rows());
    const Complex tr = (target.adjoint() * achieved).trace();
    return std::norm(tr) / (d * d);
}

double gate_frobenius_distance(const Matrix& achieved, const Matrix& target) {
    if (achieved.rows() != target.rows() || achieved.cols() != target.cols())
        throw std::invalid_argument("gate_frobenius_distance: dimension mismatch");
    return (achieved - target).norm();
}

ObservableSet population_observables(const DfsBasis& dfs) {
    ObservableSet set;
    for (size_t i = 0; i < dfs.kets.size(); ++i) {
        const CVector& k = dfs.kets[i].vector();
        set.push_back({"pop_" + dfs.labels[i], QOperator(dfs.space, k * k.adjoint())});
    }
    return set;
}

Observable fidelity_observable(const StateVector& target) {
    return {"fidelity",
            QOperator(target.space(), target.vector() * target.vector().adjoint())};
}

} // namespace holosim
