#include "holosim/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace holosim {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex i_pow(int m) {
    // i^m for any integer m
    int r = ((m % 4) + 4) % 4;
    switch (r) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

bool close(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

void DriveParams::validate() const {
    if (omega <= 0) throw std::invalid_argument("DriveParams: omega must be positive");
    if (epsilon < 0) throw std::invalid_argument("DriveParams: epsilon must be non-negative");
}

std::vector<std::string> DeviceConfig::validate_single() const {
    if (g <= 0) throw std::invalid_argument("DeviceConfig: g must be positive");
    if (delta_big <= 0) throw std::invalid_argument("DeviceConfig: delta_big must be positive");
    if (transmon_levels != 2 && transmon_levels != 3)
        throw std::invalid_argument("DeviceConfig: transmon_levels must be 2 or 3");
    if (n_max < 1) throw std::invalid_argument("DeviceConfig: n_max must be >= 1");
    std::vector<std::string> warnings;
    if (delta_big / g < 5.0) {
        std::ostringstream os;
        os << "validity margin: Delta/g = " << delta_big / g
           << " < 5, qubit-photon interaction is not perturbative";
        warnings.push_back(os.str());
    }
    return warnings;
}

std::vector<std::string> DeviceConfig::validate_double() const {
    if (g <= 0) throw std::invalid_argument("DeviceConfig: g must be positive");
    if (delta_small <= 0)
        throw std::invalid_argument("DeviceConfig: delta_small must be positive");
    if (transmon_levels != 2 && transmon_levels != 3)
        throw std::invalid_argument("DeviceConfig: transmon_levels must be 2 or 3");
    if (n_max < 1) throw std::invalid_argument("DeviceConfig: n_max must be >= 1");
    if (close(lambda, delta_small, 1e-12))
        throw std::invalid_argument("DeviceConfig: lambda == delta makes the effective "
                                    "coupling eta divergent");
    std::vector<std::string> warnings;
    const double channel = g / std::sqrt(2.0);
    const double margin = std::min(std::abs(lambda - delta_small), 2.0 * delta_small) / channel;
    if (margin < 5.0) {
        std::ostringstream os;
        os << "validity margin: min(|lambda-delta|, 2 delta)/(g/sqrt(2)) = " << margin << " < 5";
        warnings.push_back(os.str());
    }
    return warnings;
}

FidelityModel fidelity_model_from_string(const std::string& s) {
    if (s == "resonant_only") return FidelityModel::resonant_only;
    if (s == "with_J0_oscillation") return FidelityModel::with_J0_oscillation;
    if (s == "with_J0_J2") return FidelityModel::with_J0_J2;
    if (s == "with_third_level") return FidelityModel::with_third_level;
    throw std::invalid_argument("unknown fidelity_model '" + s + "'");
}

std::string to_string(FidelityModel m) {
    switch (m) {
        case FidelityModel::resonant_only: return "resonant_only";
        case FidelityModel::with_J0_oscillation: return "with_J0_oscillation";
        case FidelityModel::with_J0_J2: return "with_J0_J2";
        case FidelityModel::with_third_level: return "with_third_level";
    }
    return "?";
}

void HarmonicTermSum::add(QOperator op, Complex amplitude, double angular_frequency,
                          bool include_hc) {
    if (op.space() != space_)
        throw std::invalid_argument("HarmonicTermSum::add: operator space mismatch");
    if (!include_hc) {
        if (angular_frequency != 0.0)
            throw std::invalid_argument("HarmonicTermSum::add: terms without h.c. must be "
                                        "static (nu = 0)");
        const Matrix m = amplitude * op.matrix();
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("HarmonicTermSum::add: terms without h.c. must be "
                                        "Hermitian as stored");
    }
    terms_.push_back({std::move(op), amplitude, angular_frequency, include_hc});
}

double HarmonicTermSum::max_frequency() const {
    double nu = 0.0;
    for (const auto& t : terms_) nu = std::max(nu, std::abs(t.angular_frequency));
    return nu;
}

void HarmonicTermSum::evaluate_into(double t, Matrix& out) const {
    const int n = space_.total_dim();
    out.setZero(n, n);
    for (const auto& term : terms_) {
        const Complex c = term.amplitude * std::exp(Complex(0, term.angular_frequency * t));
        out += c * term.op.matrix();
        if (term.include_hc) out += std::conj(c) * term.op.matrix().adjoint();
    }
}

QOperator HarmonicTermSum::evaluate(double t) const {
    Matrix out;
    evaluate_into(t, out);
    return {space_, std::move(out)};
}

Matrix HarmonicTermSum::static_part() const {
    const int n = space_.total_dim();
    Matrix out = Matrix::Zero(n, n);
    for (const auto& term : terms_) {
        if (term.angular_frequency != 0.0) continue;
        out += term.amplitude * term.op.matrix();
        if (term.include_hc) out += std::conj(term.amplitude) * term.op.matrix().adjoint();
    }
    return out;
}

double bessel_j(int order, double x) {
    if (order < 0 || order > 20)
        throw std::invalid_argument("bessel_j: order must be in [0, 20]");
    if (!(x >= 0.0 && x <= 20.0))
        throw std::invalid_argument("bessel_j: argument must be in [0, 20]");
    return std::cyl_bessel_j(static_cast<double>(order), x);
}

SidebandExpansion jacobi_anger_expand(double alpha, double omega, double phi, int max_order) {
    if (max_order < 0) throw std::invalid_argument("jacobi_anger_expand: max_order must be >= 0");
    if (alpha == 0.0) return {{0, Complex(1, 0), 0.0}};
    SidebandExpansion out;
    out.reserve(static_cast<size_t>(2 * max_order + 1));
    for (int m = -max_order; m <= max_order; ++m) {
        const int am = std::abs(m);
        double jm = bessel_j(am, alpha);
        if (m < 0 && (am % 2) == 1) jm = -jm; // J_{-m} = (-1)^m J_m
        const Complex coeff = i_pow(m) * jm * std::exp(Complex(0, -m * phi));
        out.push_back({m, coeff, m * omega});
    }
    return out;
}

HilbertSpace single_qubit_space(const DeviceConfig& device) {
    return HilbertSpace({{"q1", device.transmon_levels},
                         {"q2", device.transmon_levels},
                         {"c", device.n_max + 1}});
}

HilbertSpace two_qubit_space(const DeviceConfig& device) {
    return HilbertSpace({{"q1", device.transmon_levels},
                         {"q2", device.transmon_levels},
                         {"c1", device.n_max + 1},
                         {"q3", device.transmon_levels},
                         {"q4", device.transmon_levels},
                         {"c2", device.n_max + 1}});
}

HarmonicTermSum build_single_qubit_model(const DeviceConfig& device, const DriveParams& drive1,
                                         const DriveParams& drive2, FidelityModel model) {
    device.validate_single();
    drive1.validate();
    drive2.validate();
    const double delta = device.delta_big;
    for (const DriveParams* d : {&drive1, &drive2})
        if (!close(d->omega, delta))
            throw std::invalid_argument("build_single_qubit_model: drive omega must equal the "
                                        "detuning Delta for the first sideband to be resonant");
    if (model == FidelityModel::with_third_level && device.transmon_levels != 3)
        throw std::invalid_argument("build_single_qubit_model: with_third_level requires "
                                    "transmon_levels = 3");

    const HilbertSpace space = single_qubit_space(device);
    const QOperator a_dag = annihilation(space, "c").dagger();
    HarmonicTermSum H(space);

    const DriveParams* drives[2] = {&drive1, &drive2};
    for (int j = 0; j < 2; ++j) {
        const std::string q = j == 0 ? "q1" : "q2";
        const double alpha = drives[j]->alpha();
        const double phi = drives[j]->phi;
        const QOperator sig_adag = transmon_lowering(space, q, 1) * a_dag;

        // g_j = g J1(alpha_j) exp(i(phi_j + pi/2)), resonant after RWA
        const Complex g_j =
            device.g * bessel_j(1, alpha) * std::exp(Complex(0, phi + kPi / 2));
        if (g_j != Complex(0, 0)) H.add(sig_adag, g_j, 0.0);

        if (model >= FidelityModel::with_J0_oscillation) {
            const double a0 = device.g * bessel_j(0, alpha);
            if (a0 != 0.0) H.add(sig_adag, a0, +delta);
        }
        if (model >= FidelityModel::with_J0_J2) {
            const Complex a2 =
                device.g * bessel_j(2, alpha) * std::exp(Complex(0, 2 * phi));
            if (a2 != Complex(0, 0)) H.add(sig_adag, a2, -delta);
        }
        if (model == FidelityModel::with_third_level) {
            const QOperator leak = transmon_lowering(space, q, 2) * a_dag;
            H.add(leak, std::sqrt(2.0) * device.g, 2 * delta);
        }
    }
    return H;
}

HarmonicTermSum build_two_qubit_model(const DeviceConfig& device, const DriveParams& drive2,
                                      bool include_j2) {
    device.validate_double();
    drive2.validate();
    const double delta = device.delta_small;
    if (!close(drive2.omega, 2 * delta))
        throw std::invalid_argument("build_two_qubit_model: transmon-2 drive must run at "
                                    "omega = 2 delta");

    const HilbertSpace space = two_qubit_space(device);
    HarmonicTermSum H(space);
    if (!device.coupling_on) return H; // gate switched off

    const QOperator a1_dag = annihilation(space, "c1").dagger();
    const QOperator a2_dag = annihilation(space, "c2").dagger();
    const QOperator sig2 = transmon_lowering(space, "q2", 1);
    const QOperator sig3 = transmon_lowering(space, "q3", 1);
    const QOperator sig4 = transmon_lowering(space, "q4", 1);

    // H_cc, static photon exchange between the two cavities
    const QOperator a1 = a1_dag.dagger();
    const QOperator hop = a1_dag * annihilation(space, "c2") + a2_dag * a1;
    H.add(hop, device.lambda, 0.0, /*include_hc=*/false);

    // H_int1: sign of g4 carried in the amplitude
    H.add(a2_dag * sig3, device.g3_eff(), -delta);
    H.add(a2_dag * sig4, device.g4_eff(), +delta);

    // H_int2: transmon-2 sidebands, phase convention phi = phi_2' - pi/2
    const double beta = drive2.alpha();
    const double phi = drive2.phi - kPi / 2;
    const QOperator sig2_a1dag = a1_dag * sig2;
    H.add(sig2_a1dag, device.g2_eff() * bessel_j(0, beta), +delta);
    H.add(sig2_a1dag, device.g2_eff() * bessel_j(1, beta) * std::exp(Complex(0, phi)), -delta);
    if (include_j2)
        H.add(sig2_a1dag, device.g2_eff() * bessel_j(2, beta) * std::exp(Complex(0, 2 * phi)),
              -3 * delta);

    if (device.stark_compensation) {
        // Second-order dispersive shifts of the three coupled transmons from the
        // two virtual-photon channels at lambda +- delta; cancelling them by
        // frequency retuning leaves the pure exchange Hamiltonian at this order.
        const double denom = device.lambda * device.lambda - delta * delta;
        const double j0 = bessel_j(0, beta), j1 = bessel_j(1, beta);
        const double g2sq = device.g2_eff() * device.g2_eff();
        const double g3sq = device.g3_eff() * device.g3_eff();
        const double g4sq = device.g4_eff() * device.g4_eff();
        const double shift2 = g2sq * delta * (j0 * j0 - j1 * j1) / denom;
        const double shift3 = -g3sq * delta / denom;
        const double shift4 = +g4sq * delta / denom;
        const std::pair<const char*, double> comps[] = {
            {"q2", shift2}, {"q3", shift3}, {"q4", shift4}};
        for (const auto& [label, shift] : comps) {
            const QOperator sig = transmon_lowering(space, label, 1);
            H.add(dagger(sig) * sig, -shift, 0.0, /*include_hc=*/false);
        }
    }
    return H;
}

double effective_coupling_eta(const DeviceConfig& device) {
    const double den = device.lambda * device.lambda - device.delta_small * device.delta_small;
    if (close(device.lambda, device.delta_small, 1e-12))
        throw std::invalid_argument("effective_coupling_eta: lambda == delta");
    return device.g * device.g * device.lambda / den;
}

HarmonicTermSum effective_two_qubit_hamiltonian(const DeviceConfig& device, double beta,
                                                double phi) {
    device.validate_double();
    const double eta = effective_coupling_eta(device);
    const HilbertSpace space = two_qubit_space(device);
    const QOperator sig2_dag = transmon_lowering(space, "q2", 1).dagger();
    const QOperator sig3 = transmon_lowering(space, "q3", 1);
    const QOperator sig4 = transmon_lowering(space, "q4", 1);

    HarmonicTermSum H(space);
    // Written so that <a1|H|00> = eta J1(beta) e^{i phi}, the form the gate
    // matrix U(theta, phi) is derived from.
    H.add(sig2_dag * sig3, eta * bessel_j(1, beta) * std::exp(Complex(0, phi)), 0.0);
    H.add(sig2_dag * sig4, -eta * bessel_j(0, beta), 0.0);
    return H;
}

} // namespace holosim
