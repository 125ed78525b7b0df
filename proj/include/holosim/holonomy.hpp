#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holosim/lindblad.hpp"
#include "holosim/model.hpp"
#include "holosim/operators.hpp"

namespace holosim {

/// Target holonomic gate angles. `theta` in [0, pi]; `phi` normalized to (-pi, pi].
struct GateSpec {
    enum class Kind { single, two_qubit };
    double theta = 0.0;
    double phi = 0.0;
    Kind kind = Kind::single;

    void validate() const;
};

double normalize_phase(double phi);

/// Decoherence-free subspace: ordered labelled kets, the first
/// `computational_count` of which carry the logical information.
struct DfsBasis {
    HilbertSpace space;
    std::vector<std::string> labels;
    std::vector<StateVector> kets;
    int computational_count = 0;

    const StateVector& ket(const std::string& label) const;
    std::vector<std::string> computational_labels() const;
};

/// S1 = {|100>, |010>, |001>} = {|0>_L, |1>_L, |E>_L} on {q1, q2, c}.
DfsBasis dfs_s1(const HilbertSpace& space);

/// Six-dimensional DFS of the coupled-cavity block on {q1,q2,c1,q3,q4,c2}:
/// four logical two-qubit kets plus the ancillas |a1> = |110000>, |a2> = |000110>.
DfsBasis dfs_s2(const HilbertSpace& space);

/// [[cos t, sin t e^{-i p}], [sin t e^{i p}, -cos t]] on {|0>_L, |1>_L}.
Matrix single_qubit_gate_matrix(const GateSpec& spec);

/// Block-diagonal two-qubit holonomy on {|00>,|01>} + {|10>,|11>}.
Matrix two_qubit_gate_matrix(const GateSpec& spec);

struct DarkBright {
    Eigen::Vector2cd dark;
    Eigen::Vector2cd bright;
};

/// Dark/bright decomposition of the logical qubit for a single-qubit spec.
DarkBright dark_bright_states(const GateSpec& spec);

struct CalibrationResult {
    // single-qubit drives
    double alpha1 = 0.0, alpha2 = 0.0;
    double phi1 = 0.0, phi2 = 0.0;
    // two-qubit drive
    double beta = 0.0, phi2prime = 0.0;
    double xi = 0.0;  // effective Rabi frequency, rad/ns
    double tau = 0.0; // analytic gate time pi/xi, ns
    std::vector<std::string> diagnostics;
};

/// Fixes J1(alpha2) = 0.5 and solves J1(alpha1) = 0.5 tan(theta/2) on the first
/// monotonic branch of J1; roles swap when that target exceeds J1's maximum so
/// that any theta in [0, pi) is reachable. theta = pi is a degenerate
/// calibration (the transmon-2 resonant term would have to vanish).
CalibrationResult calibrate_single(const GateSpec& spec, double g, double delta = 0.0);

/// Solves g3 J1(beta) / (g J0(beta)) = tan(theta/2) below the first zero of J0.
CalibrationResult calibrate_double(const GateSpec& spec, const DeviceConfig& device);

struct RefineResult {
    double tau = 0.0;
    std::vector<std::string> warnings;
};

/// Scans tau over [0.8, 1.2] * tau_initial (41 grid points, then golden-section
/// refinement to 0.01 ns) maximizing the closed-system gate fidelity of the
/// propagated full model projected onto the DFS against `target`.
RefineResult refine_gate_time(const HarmonicTermSum& H_full, const Matrix& target,
                              const DfsBasis& dfs, double tau_initial,
                              std::optional<double> dt = std::nullopt);

struct Holonomy {
    Matrix gate;
    double leakage; // 1 - min singular value^2 of the projected block
};

/// Restriction of U to the named computational kets of the DFS.
Holonomy extract_holonomy(const QOperator& U_full, const DfsBasis& dfs,
                          const std::vector<std::string>& computational_labels);

/// Evolves |d>, |b> under H and returns max_{i,j} |<psi_i(t)|H(t)|psi_j(t)>|
/// over t_samples points in [0, pi/xi]; zero violation certifies parallel
/// transport, i.e. a purely geometric gate.
double check_parallel_transport(const HarmonicTermSum& H, const DfsBasis& dfs,
                                const GateSpec& spec, int t_samples);

} // namespace holosim
