#include "holosim/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

#include "holosim/metrics.hpp"

namespace holosim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kJ1FirstMax = 1.8411837813406593; // argmax of J1
constexpr double kJ0FirstZero = 2.4048255576957728;

double solve_bessel_ratio(int num_order, double target,
                          double lo, double hi,
                          double (*f)(double)) {
    // f monotone increasing on [lo, hi], f(lo) <= target <= f(hi)
    (void)num_order;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double j1_value(double x) { return bessel_j(1, x); }
double j1_over_j0(double x) { return bessel_j(1, x) / bessel_j(0, x); }

} // namespace

double normalize_phase(double phi) {
    double x = std::remainder(phi, 2 * kPi); // in [-pi, pi]
    if (x <= -kPi) x += 2 * kPi;
    return x;
}

void GateSpec::validate() const {
    if (!(theta >= 0.0 && theta <= kPi))
        throw std::invalid_argument("GateSpec: theta must lie in [0, pi]");
}

const StateVector& DfsBasis::ket(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return kets[i];
    throw std::invalid_argument("DfsBasis: no ket labelled '" + label + "'");
}

std::vector<std::string> DfsBasis::computational_labels() const {
    return {labels.begin(), labels.begin() + computational_count};
}

DfsBasis dfs_s1(const HilbertSpace& space) {
    if (space.subsystem_count() != 3 || !space.has_label("q1") || !space.has_label("q2") ||
        !space.has_label("c"))
        throw std::invalid_argument("dfs_s1: expected space {q1, q2, c}, got " +
                                    space.describe());
    DfsBasis dfs;
    dfs.space = space;
    dfs.labels = {"0L", "1L", "EL"};
    dfs.kets = {basis_ket(space, {1, 0, 0}), basis_ket(space, {0, 1, 0}),
                basis_ket(space, {0, 0, 1})};
    dfs.computational_count = 2;
    return dfs;
}

DfsBasis dfs_s2(const HilbertSpace& space) {
    for (const char* l : {"q1", "q2", "c1", "q3", "q4", "c2"})
        if (!space.has_label(l))
            throw std::invalid_argument("dfs_s2: expected space {q1,q2,c1,q3,q4,c2}, got " +
                                        space.describe());
    DfsBasis dfs;
    dfs.space = space;
    dfs.labels = {"00L", "01L", "10L", "11L", "a1", "a2"};
    dfs.kets = {basis_ket(space, {1, 0, 0, 1, 0, 0}), basis_ket(space, {1, 0, 0, 0, 1, 0}),
                basis_ket(space, {0, 1, 0, 1, 0, 0}), basis_ket(space, {0, 1, 0, 0, 1, 0}),
                basis_ket(space, {1, 1, 0, 0, 0, 0}), basis_ket(space, {0, 0, 0, 1, 1, 0})};
    dfs.computational_count = 4;
    return dfs;
}

Matrix single_qubit_gate_matrix(const GateSpec& spec) {
    spec.validate();
    const double c = std::cos(spec.theta), s = std::sin(spec.theta);
    Matrix u(2, 2);
    u(0, 0) = c;
    u(0, 1) = s * std::exp(Complex(0, -spec.phi));
    u(1, 0) = s * std::exp(Complex(0, spec.phi));
    u(1, 1) = -c;
    return u;
}

Matrix two_qubit_gate_matrix(const GateSpec& spec) {
    spec.validate();
    const double c = std::cos(spec.theta), s = std::sin(spec.theta);
    const Complex em = s * std::exp(Complex(0, -spec.phi));
    const Complex ep = s * std::exp(Complex(0, spec.phi));
    Matrix u = Matrix::Zero(4, 4);
    u(0, 0) = c;
    u(0, 1) = em;
    u(1, 0) = ep;
    u(1, 1) = -c;
    u(2, 2) = -c;
    u(2, 3) = em;
    u(3, 2) = ep;
    u(3, 3) = c;
    return u;
}

DarkBright dark_bright_states(const GateSpec& spec) {
    spec.validate();
    if (spec.kind != GateSpec::Kind::single)
        throw std::invalid_argument("dark_bright_states: single-qubit spec required");
    const double ch = std::cos(spec.theta / 2), sh = std::sin(spec.theta / 2);
    DarkBright db;
    db.dark << ch, sh * std::exp(Complex(0, spec.phi));
    db.bright << sh * std::exp(Complex(0, -spec.phi)), -ch;
    return db;
}

CalibrationResult calibrate_single(const GateSpec& spec, double g, double delta) {
    spec.validate();
    if (spec.kind != GateSpec::Kind::single)
        throw std::invalid_argument("calibrate_single: single-qubit spec required");
    if (g <= 0) throw std::invalid_argument("calibrate_single: g must be positive");
    if (spec.theta == kPi)
        throw std::invalid_argument(
            "calibrate_single: theta = pi is degenerate with this parameterization "
            "(J1(alpha2) would have to vanish); use the phi-rotated equivalent gate");

    const double tan_half = std::tan(spec.theta / 2);
    const double j1_max = bessel_j(1, kJ1FirstMax);

    double j1a1, j1a2;
    if (0.5 * tan_half <= j1_max) {
        j1a1 = 0.5 * tan_half;
        j1a2 = 0.5;
    } else {
        j1a1 = 0.5;
        j1a2 = 0.5 / tan_half;
    }

    CalibrationResult cal;
    cal.alpha1 = j1a1 == 0.0 ? 0.0 : solve_bessel_ratio(1, j1a1, 0.0, kJ1FirstMax, &j1_value);
    cal.alpha2 = solve_bessel_ratio(1, j1a2, 0.0, kJ1FirstMax, &j1_value);
    cal.phi2 = 0.0;
    cal.phi1 = normalize_phase(spec.phi + kPi);
    cal.xi = g * std::hypot(j1a1, j1a2);
    cal.tau = kPi / cal.xi;

    std::ostringstream os;
    os << "J1(alpha1) = " << j1a1 << ", J1(alpha2) = " << j1a2;
    cal.diagnostics.push_back(os.str());
    if (delta > 0) {
        std::ostringstream m;
        m << "RWA margin Delta/xi1 = " << delta / cal.xi;
        cal.diagnostics.push_back(m.str());
    }
    return cal;
}

CalibrationResult calibrate_double(const GateSpec& spec, const DeviceConfig& device) {
    spec.validate();
    if (spec.kind != GateSpec::Kind::two_qubit)
        throw std::invalid_argument("calibrate_double: two-qubit spec required");
    device.validate_double();
    const double tan_half = std::tan(spec.theta / 2);
    const double target = tan_half * device.g / device.g3_eff();
    if (!(target >= 0))
        throw std::invalid_argument("calibrate_double: negative Bessel ratio requested");
    const double hi = kJ0FirstZero - 1e-6;
    if (spec.theta == kPi || j1_over_j0(hi) < target)
        throw std::invalid_argument("calibrate_double: theta requires beta beyond the "
                                    "supported branch (below the first zero of J0)");

    CalibrationResult cal;
    cal.beta = target == 0.0 ? 0.0 : solve_bessel_ratio(1, target, 0.0, hi, &j1_over_j0);
    cal.phi2prime = normalize_phase(spec.phi + kPi / 2);
    const double eta = effective_coupling_eta(device);
    cal.xi = std::abs(eta) * std::hypot(bessel_j(0, cal.beta), bessel_j(1, cal.beta));
    cal.tau = kPi / cal.xi;

    std::ostringstream os;
    os << "eta = " << eta << " rad/ns, J0(beta) = " << bessel_j(0, cal.beta)
       << ", J1(beta) = " << bessel_j(1, cal.beta);
    cal.diagnostics.push_back(os.str());
    std::ostringstream m;
    m << "RWA margin delta/(g/sqrt(2)) = " << device.delta_small / (device.g / std::sqrt(2.0));
    cal.diagnostics.push_back(m.str());
    return cal;
}

Holonomy extract_holonomy(const QOperator& U_full, const DfsBasis& dfs,
                          const std::vector<std::string>& computational_labels) {
    if (U_full.space() != dfs.space)
        throw std::invalid_argument("extract_holonomy: U and DFS live on different spaces");
    const int d = static_cast<int>(computational_labels.size());
    Matrix gate(d, d);
    for (int i = 0; i < d; ++i) {
        const CVector& bra = dfs.ket(computational_labels[static_cast<size_t>(i)]).vector();
        for (int j = 0; j < d; ++j) {
            const CVector& ket = dfs.ket(computational_labels[static_cast<size_t>(j)]).vector();
            gate(i, j) = bra.dot(U_full.matrix() * ket);
        }
    }
    Eigen::JacobiSVD<Matrix> svd(gate);
    const double smin = svd.singularValues().minCoeff();
    return {std::move(gate), 1.0 - smin * smin};
}

namespace {

struct HolonomyFidelity {
    const HarmonicTermSum& H;
    const DfsBasis& dfs;
    const Matrix& target;
    std::vector<std::string> labels;

    double operator()(const Matrix& u) const {
        return gate_fidelity(extract_holonomy(QOperator(dfs.space, u), dfs, labels).gate,
                             target);
    }
};

} // namespace

RefineResult refine_gate_time(const HarmonicTermSum& H_full, const Matrix& target,
                              const DfsBasis& dfs, double tau_initial,
                              std::optional<double> dt) {
    if (tau_initial <= 0)
        throw std::invalid_argument("refine_gate_time: tau_initial must be positive");
    if (H_full.space() != dfs.space)
        throw std::invalid_argument("refine_gate_time: model and DFS space mismatch");

    RefineResult result;
    HolonomyFidelity fidelity{H_full, dfs, target, dfs.computational_labels()};

    // 41 grid points tau = (0.8 + 0.01 j) tau_initial reached by one propagation
    // with checkpoints; golden-section then refines between neighbours.
    const double grid = 0.01 * tau_initial;
    const double dt_req = dt.value_or(default_step(H_full, tau_initial));
    const long per_grid = std::max<long>(1, static_cast<long>(std::ceil(grid / dt_req)));
    const double h = grid / static_cast<double>(per_grid);

    const int n = dfs.space.total_dim();
    Matrix u = Matrix::Identity(n, n);
    std::vector<Matrix> checkpoints(41);
    std::vector<double> f(41);
    for (int seg = 1; seg <= 120; ++seg) {
        u = propagate_columns(H_full, std::move(u), (seg - 1) * grid, grid, h);
        if (seg >= 80) {
            checkpoints[static_cast<size_t>(seg - 80)] = u;
            f[static_cast<size_t>(seg - 80)] = fidelity(u);
        }
    }

    int best = 0;
    for (int j = 1; j <= 40; ++j)
        if (f[static_cast<size_t>(j)] > f[static_cast<size_t>(best)]) best = j;
    const auto tau_at = [&](int j) { return (0.8 + 0.01 * j) * tau_initial; };

    int maxima = 0;
    for (int j = 1; j < 40; ++j)
        if (f[static_cast<size_t>(j)] >= f[static_cast<size_t>(j - 1)] &&
            f[static_cast<size_t>(j)] >= f[static_cast<size_t>(j + 1)])
            ++maxima;
    if (maxima > 1) {
        result.warnings.push_back("refine_gate_time: fidelity not unimodal over the scan "
                                  "window; returning best grid point");
        result.tau = tau_at(best);
        return result;
    }
    if (best == 0 || best == 40)
        result.warnings.push_back("refine_gate_time: optimum at the scan-window boundary");

    const auto eval = [&](double tau) {
        int base = std::clamp(static_cast<int>(std::floor((tau / tau_initial - 0.8) / 0.01)),
                              0, 40);
        double rem = tau - tau_at(base);
        if (rem < 1e-12) return f[static_cast<size_t>(base)];
        const long steps = std::max<long>(1, static_cast<long>(std::ceil(rem / h)));
        Matrix v = propagate_columns(H_full, checkpoints[static_cast<size_t>(base)],
                                     tau_at(base), rem, rem / static_cast<double>(steps));
        return fidelity(v);
    };

    double a = tau_at(std::max(0, best - 1));
    double b = tau_at(std::min(40, best + 1));
    double best_tau = tau_at(best);
    double best_f = f[static_cast<size_t>(best)];
    const double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = eval(c), fd = eval(d);
    while (b - a > 0.01) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = eval(d);
        }
        if (fc > best_f) best_f = fc, best_tau = c;
        if (fd > best_f) best_f = fd, best_tau = d;
    }
    result.tau = best_tau;
    return result;
}

double check_parallel_transport(const HarmonicTermSum& H, const DfsBasis& dfs,
                                const GateSpec& spec, int t_samples) {
    if (spec.kind != GateSpec::Kind::single)
        throw std::invalid_argument("check_parallel_transport: single-qubit spec required");
    if (dfs.computational_count != 2 || dfs.kets.size() < 3)
        throw std::invalid_argument("check_parallel_transport: Lambda-type DFS required");
    if (t_samples < 2) throw std::invalid_argument("check_parallel_transport: need >= 2 samples");

    const DarkBright db = dark_bright_states(spec);
    const int n = dfs.space.total_dim();
    Matrix psi(n, 2);
    psi.col(0) = db.dark(0) * dfs.kets[0].vector() + db.dark(1) * dfs.kets[1].vector();
    psi.col(1) = db.bright(0) * dfs.kets[0].vector() + db.bright(1) * dfs.kets[1].vector();

    const Matrix h_static = H.static_part();
    const double xi = std::abs(dfs.kets[2].vector().dot(h_static * psi.col(1)));

    Matrix ht(n, n);
    const auto violation_at = [&](double t, const Matrix& y) {
        H.evaluate_into(t, ht);
        const Eigen::Matrix2cd block = y.adjoint() * (ht * y);
        return block.cwiseAbs().maxCoeff();
    };

    if (xi <= 0.0) return violation_at(0.0, psi);

    const double tau = kPi / xi;
    const double seg = tau / (t_samples - 1);
    const double dt_req = default_step(H, tau);
    const long per_seg = std::max<long>(1, static_cast<long>(std::ceil(seg / dt_req)));
    const double h = seg / static_cast<double>(per_seg);

    double worst = violation_at(0.0, psi);
    for (int s = 1; s < t_samples; ++s) {
        psi = propagate_columns(H, std::move(psi), (s - 1) * seg, seg, h);
        worst = std::max(worst, violation_at(s * seg, psi));
    }
    return worst;
}

} // namespace holosim
