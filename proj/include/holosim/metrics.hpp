#pragma once

#include <string>
#include <utility>
#include <vector>

#include "holosim/holonomy.hpp"
#include "holosim/lindblad.hpp"
#include "holosim/operators.hpp"

namespace holosim {

using ObservableSet = std::vector<Observable>;

/// Physical state sum_i c_i |ket_i> over the computational kets of the DFS.
StateVector embed_logical_state(const DfsBasis& dfs, const CVector& logical_amplitudes);

/// <psi_f| rho |psi_f>, the paper-style pure-target overlap, clamped to [0, 1].
double state_fidelity(const DensityMatrix& rho, const StateVector& target);

/// <k| rho |k> for every DFS ket, plus "residual" = tr rho - sum (leakage out
/// of the DFS).
std::vector<std::pair<std::string, double>> populations(const DensityMatrix& rho,
                                                        const DfsBasis& dfs);

/// |tr(target^dag achieved)|^2 / d^2 — global-phase-invariant gate overlap.
double gate_fidelity(const Matrix& achieved, const Matrix& target);

/// Phase-sensitive companion metric: Frobenius norm of (achieved - target).
double gate_frobenius_distance(const Matrix& achieved, const Matrix& target);

/// Projector observables |k><k| for every DFS ket, labelled "pop_<label>".
ObservableSet population_observables(const DfsBasis& dfs);

/// Projector observable |target><target| labelled "fidelity".
Observable fidelity_observable(const StateVector& target);

} // namespace holosim
