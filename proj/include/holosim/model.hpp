#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holosim/operators.hpp"

namespace holosim {

/// Sinusoidal frequency-modulation drive on one transmon:
/// omega_q(t) = omega_q + epsilon * sin(omega t - phi).
struct DriveParams {
    double epsilon = 0.0; // modulation amplitude, rad/ns
    double omega = 0.0;   // modulation frequency, rad/ns
    double phi = 0.0;     // modulation phase, rad

    double alpha() const { return epsilon / omega; }
    void validate() const;
};

/// Physical device parameters in rad/ns. `delta_big` is the qubit-cavity
/// detuning of the single-logical-qubit block; `delta_small` and `lambda`
/// configure the coupled-cavity two-qubit block.
struct DeviceConfig {
    double g = 0.0;             // qubit-cavity coupling
    double delta_big = 0.0;     // Delta = omega_c - omega_q
    double anharmonicity = 0.0; // transmon anharmonicity
    int transmon_levels = 2;    // 2 or 3
    int n_max = 2;              // cavity Fock truncation (levels 0..n_max)

    // Two-qubit block
    double delta_small = 0.0; // delta = omega_q3 - omega_c = omega_c - omega_q4
    double lambda = 0.0;      // cavity-cavity exchange strength
    std::optional<double> g2, g3, g4; // per-transmon couplings; defaults g, g, -g
    bool coupling_on = true;          // cavity-cavity coupling switch
    // Retune each driven transmon by its known second-order dispersive shift
    // (the shifts are eta/2-scale, the same order as the exchange coupling,
    // so the uncompensated block cannot follow the target holonomy).
    bool stark_compensation = true;

    double g2_eff() const { return g2.value_or(g); }
    double g3_eff() const { return g3.value_or(g); }
    double g4_eff() const { return g4.value_or(-g); }

    /// Hard errors throw; soft validity issues are returned as warnings.
    std::vector<std::string> validate_single() const;
    std::vector<std::string> validate_double() const;
};

/// Which residual terms to keep alongside the resonant interaction.
/// Each model extends the previous one.
enum class FidelityModel {
    resonant_only,
    with_J0_oscillation,
    with_J0_J2,
    with_third_level,
};

FidelityModel fidelity_model_from_string(const std::string& s);
std::string to_string(FidelityModel m);

/// One sideband of exp[i alpha cos(omega t - phi)]:
/// coefficient i^m J_m(alpha) e^{-i m phi}, frequency shift m * omega.
struct SidebandTerm {
    int order;
    Complex coefficient;
    double frequency_shift;
};
using SidebandExpansion = std::vector<SidebandTerm>;

/// Time-dependent Hamiltonian as a finite harmonic sum
///   H(t) = sum_k amplitude_k * op_k * exp(i nu_k t) + h.c.
/// Terms with include_hc=false must be static (nu=0) and Hermitian as stored.
struct HarmonicTerm {
    QOperator op;
    Complex amplitude;        // rad/ns
    double angular_frequency; // nu_k, rad/ns
    bool include_hc;
};

class HarmonicTermSum {
public:
    explicit HarmonicTermSum(HilbertSpace space) : space_(std::move(space)) {}

    void add(QOperator op, Complex amplitude, double angular_frequency, bool include_hc = true);

    const HilbertSpace& space() const { return space_; }
    const std::vector<HarmonicTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /// max_k |nu_k|; drives the integrator step-size rule.
    double max_frequency() const;

    QOperator evaluate(double t) const;
    void evaluate_into(double t, Matrix& out) const;

    /// Sum of the static (nu = 0) part only, h.c. included.
    Matrix static_part() const;

private:
    HilbertSpace space_;
    std::vector<HarmonicTerm> terms_;
};

/// Bessel function of the first kind J_order(x) for 0 <= order <= 20,
/// 0 <= x <= 20.
double bessel_j(int order, double x);

SidebandExpansion jacobi_anger_expand(double alpha, double omega, double phi,
                                      int max_order = 12);

HilbertSpace single_qubit_space(const DeviceConfig& device);
HilbertSpace two_qubit_space(const DeviceConfig& device);

/// Rotating-frame Hamiltonian of two driven transmons sharing one cavity,
/// on space {q1, q2, c}. Both drives must run at the sideband resonance
/// omega_j = Delta.
HarmonicTermSum build_single_qubit_model(const DeviceConfig& device, const DriveParams& drive1,
                                         const DriveParams& drive2, FidelityModel model);

/// Full two-logical-qubit Hamiltonian H_cc + H_int1 + H_int2 on
/// {q1, q2, c1, q3, q4, c2}. Transmon 1 idles. `include_j2` restores the
/// second-order sideband of the transmon-2 drive for error budgeting.
HarmonicTermSum build_two_qubit_model(const DeviceConfig& device, const DriveParams& drive2,
                                      bool include_j2 = false);

/// Static second-order Hamiltonian eta [J1(beta) e^{i phi} sigma2^dag sigma3
/// - J0(beta) sigma2^dag sigma4] + h.c. with eta = g^2 lambda/(lambda^2-delta^2),
/// used as the oracle against the full model.
HarmonicTermSum effective_two_qubit_hamiltonian(const DeviceConfig& device, double beta,
                                                double phi);

/// eta = g^2 lambda / (lambda^2 - delta^2); throws when lambda == delta.
double effective_coupling_eta(const DeviceConfig& device);

} // namespace holosim
