#include "bosonet/reservoir.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bosonet {

namespace {

constexpr double kCoarseGrainBound = 0.3;

void require_nonzero(double value, const char* name) {
    if (value == 0.0)
        throw ValidationError(std::string("effective_couplings: ") + name + " must be nonzero");
}

// Checks that phi_ell vanishes, i.e. selectivity tuning has been applied.
void require_tuned(const EffectiveCouplings& c, int ell) {
    const double scale = std::max({std::abs(c.xi), std::abs(c.zeta), std::abs(c.varpi_g),
                                   std::abs(c.varpi_e), std::abs(c.delta), 1e-300});
    if (std::abs(c.phi_n(ell)) > 1e-9 * scale)
        throw ValidationError("selectivity tuning for ell=" + std::to_string(ell) +
                              " has not been applied (phi_ell != 0)");
}

Eigen::MatrixXcd joint_pass_hamiltonian_selective(Complex zeta_ell, int ell, int d) {
    // Mode (x) atom with atom index 0 = g, 1 = e:
    // H1 = zeta_ell |ell+1><ell| sigma_ge + H.c.
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    h((ell + 1) * 2 + 0, ell * 2 + 1) = zeta_ell;
    h(ell * 2 + 1, (ell + 1) * 2 + 0) = std::conj(zeta_ell);
    return h;
}

Eigen::MatrixXcd joint_pass_hamiltonian_jc(double g, int d) {
    // Resonant two-level exchange: g sum_n sqrt(n+1)(|n+1,g><n,e| + H.c.).
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    for (int n = 0; n + 1 < d; ++n) {
        const double amp = g * std::sqrt(n + 1.0);
        h((n + 1) * 2 + 0, n * 2 + 1) = amp;
        h(n * 2 + 1, (n + 1) * 2 + 0) = amp;
    }
    return h;
}

Eigen::MatrixXcd pass_unitary(const Eigen::MatrixXcd& h, double tau) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const Complex i(0.0, 1.0);
    Eigen::VectorXcd phases =
        (-i * tau * solver.eigenvalues().array().cast<Complex>()).exp();
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

EffectiveCouplings effective_couplings(const DriveParams& p) {
    require_nonzero(p.Delta, "Delta");
    require_nonzero(p.Delta1, "Delta1");
    require_nonzero(p.Delta2, "Delta2");
    EffectiveCouplings c;
    c.xi = std::norm(p.Omega0) / p.Delta;
    c.zeta = std::sqrt(2.0) * std::conj(p.Omega0) * p.Omega2 *
             (1.0 / p.Delta + 1.0 / p.Delta2) / 4.0;
    c.varpi_g = std::norm(p.Omega1) / p.Delta1;
    c.varpi_e = std::norm(p.Omega2) / p.Delta2;
    c.delta = p.delta;
    return c;
}

SelectivityTuning selectivity_tuning(const DriveParams& p, int ell) {
    if (ell < 0) throw ValidationError("selectivity_tuning: ell must be >= 0");
    const EffectiveCouplings c = effective_couplings(p);
    const double arg = (ell + 1.0) * p.Delta1 / p.Delta;
    if (arg <= 0.0)
        throw ValidationError("selectivity_tuning: Delta and Delta1 must share a sign");
    SelectivityTuning tuning;
    tuning.Omega1_mag = std::sqrt(arg) * std::abs(p.Omega0);
    tuning.delta = c.varpi_e;
    return tuning;
}

DriveParams apply_tuning(DriveParams p, int ell) {
    const SelectivityTuning tuning = selectivity_tuning(p, ell);
    const double phase = std::arg(p.Omega1);
    p.Omega1 = std::polar(tuning.Omega1_mag, std::abs(p.Omega1) > 0.0 ? phase : 0.0);
    p.delta = tuning.delta;
    p.ell_target = ell;
    return p;
}

double engineered_rate(const DriveParams& p, int ell) {
    if (ell < 0) throw ValidationError("engineered_rate: ell must be >= 0");
    const EffectiveCouplings c = effective_couplings(p);
    const double zt = c.zeta_n(ell) * p.tau;
    return p.r * zt * zt;
}

bool RegimeReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const RegimeCheck& c) { return c.pass; });
}

bool RegimeReport::category_pass(const std::string& category) const {
    return std::all_of(checks.begin(), checks.end(), [&](const RegimeCheck& c) {
        return c.category != category || c.pass;
    });
}

RegimeReport validate_regime(const DriveParams& p, int n_max, double threshold) {
    if (n_max < 0) throw ValidationError("validate_regime: n_max must be >= 0");
    const EffectiveCouplings c = effective_couplings(p);
    RegimeReport report;
    report.threshold = threshold;

    auto ratio_of = [](double lhs, double rhs) {
        return rhs == 0.0 ? std::numeric_limits<double>::infinity() : lhs / rhs;
    };
    auto add = [&](std::string name, std::string category, double lhs, double rhs) {
        const double ratio = ratio_of(lhs, rhs);
        report.checks.push_back(
            {std::move(name), std::move(category), lhs, rhs, ratio, ratio >= threshold});
    };

    add("mode_addressing (lambda >> Omega0)", "addressing", p.lambda, std::abs(p.Omega0));
    for (int n = 0; n <= n_max; ++n)
        add("dispersive_cavity[n=" + std::to_string(n) + "] (Delta >> Omega0 sqrt(n+1))",
            "dispersive", std::abs(p.Delta), std::abs(p.Omega0) * std::sqrt(n + 1.0));
    add("dispersive_laser1 (Delta1 >> Omega1)", "dispersive", std::abs(p.Delta1),
        std::abs(p.Omega1));
    add("dispersive_laser2 (Delta2 >> Omega2)", "dispersive", std::abs(p.Delta2),
        std::abs(p.Omega2));
    for (int k = 0; k <= n_max; ++k)
        add("selectivity_rwa[k=" + std::to_string(k) + "] (xi >> sqrt(k+2) zeta)",
            "selectivity", std::abs(c.xi), std::sqrt(k + 2.0) * std::abs(c.zeta));

    // Perturbative validity of Gamma = r (zeta tau)^2; bound/value, pass at >= 1.
    const double zt = c.zeta_n(p.ell_target) * p.tau;
    const double cg_ratio = zt == 0.0 ? std::numeric_limits<double>::infinity()
                                      : kCoarseGrainBound / zt;
    report.checks.push_back({"coarse_grain[ell=" + std::to_string(p.ell_target) +
                                 "] (zeta_ell tau <= 0.3)",
                             "coarse_grain", kCoarseGrainBound, zt, cg_ratio,
                             cg_ratio >= 1.0});
    return report;
}

double simulate_atom_pass(const DriveParams& p, int field_n, double duration,
                          AtomState initial) {
    if (field_n < 0) throw ValidationError("simulate_atom_pass: field_n must be >= 0");
    if (duration <= 0.0) throw ValidationError("simulate_atom_pass: duration must be positive");
    const EffectiveCouplings c = effective_couplings(p);
    require_tuned(c, p.ell_target);

    const int d = std::max(field_n, p.ell_target + 1) + 2;
    const int dim = 2 * d;

    // V_eff(t) = sum_n zeta_n |n+1><n| sigma_ge e^{i phi_n t} + H.c.
    std::vector<Complex> zeta_n(static_cast<std::size_t>(d - 1));
    std::vector<double> phi_n(static_cast<std::size_t>(d - 1));
    double fmax = std::abs(c.zeta);
    for (int n = 0; n + 1 < d; ++n) {
        zeta_n[n] = std::sqrt(n + 1.0) * c.zeta;
        phi_n[n] = c.phi_n(n);
        fmax = std::max({fmax, std::abs(phi_n[n]), std::abs(zeta_n[n])});
    }

    auto apply_h = [&](double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) {
        out.setZero();
        const Complex i(0.0, 1.0);
        for (int n = 0; n + 1 < d; ++n) {
            const Complex amp = zeta_n[n] * std::exp(i * phi_n[n] * t);
            out((n + 1) * 2 + 0) += amp * psi(n * 2 + 1);
            out(n * 2 + 1) += std::conj(amp) * psi((n + 1) * 2 + 0);
        }
        out *= -i;
    };

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(field_n * 2 + (initial == AtomState::excited ? 1 : 0)) = 1.0;

    // Resolve the fastest phase: step at most 1/(50 fmax).
    const double dt_max = fmax > 0.0 ? 1.0 / (50.0 * fmax) : duration / 100.0;
    const long n_steps =
        std::max<long>(100, static_cast<long>(std::ceil(duration / dt_max)));
    const double h = duration / static_cast<double>(n_steps);

    Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    double t = 0.0;
    for (long s = 0; s < n_steps; ++s) {
        apply_h(t, psi, k1);
        tmp = psi + (0.5 * h) * k1;
        apply_h(t + 0.5 * h, tmp, k2);
        tmp = psi + (0.5 * h) * k2;
        apply_h(t + 0.5 * h, tmp, k3);
        tmp = psi + h * k3;
        apply_h(t + h, tmp, k4);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }

    const int flipped = initial == AtomState::excited ? 0 : 1;
    double prob = 0.0;
    for (int n = 0; n < d; ++n) prob += std::norm(psi(n * 2 + flipped));
    return prob;
}

RepeatedInteractionResult repeated_interaction_check(const DriveParams& p,
                                                     const ChannelSpec& channel,
                                                     int n_atoms) {
    if (n_atoms < 10)
        throw ValidationError("repeated_interaction_check: need at least 10 atoms");
    if (p.r <= 0.0 || p.tau <= 0.0)
        throw ValidationError("repeated_interaction_check: r and tau must be positive");
    const EffectiveCouplings c = effective_couplings(p);

    int source = 0;
    AtomState atom = AtomState::excited;
    Eigen::MatrixXcd h;
    double rabi = 0.0;
    int d = 0;
    switch (channel.kind) {
        case ChannelKind::selective_absorption:
            require_tuned(c, channel.ell);
            source = channel.ell;
            atom = AtomState::excited;
            rabi = c.zeta_n(channel.ell);
            d = channel.ell + 3;
            h = joint_pass_hamiltonian_selective(std::sqrt(channel.ell + 1.0) * c.zeta,
                                                 channel.ell, d);
            break;
        case ChannelKind::selective_emission:
            require_tuned(c, channel.ell);
            source = channel.ell + 1;
            atom = AtomState::ground;
            rabi = c.zeta_n(channel.ell);
            d = channel.ell + 3;
            h = joint_pass_hamiltonian_selective(std::sqrt(channel.ell + 1.0) * c.zeta,
                                                 channel.ell, d);
            break;
        case ChannelKind::cooling:
            source = 1;
            atom = AtomState::ground;
            rabi = std::abs(c.zeta);
            d = 3;
            h = joint_pass_hamiltonian_jc(std::abs(c.zeta), d);
            break;
        default:
            throw ValidationError(
                "repeated_interaction_check: channel must be an engineered kind");
    }

    const double zt = rabi * p.tau;
    if (zt > kCoarseGrainBound + 1e-12)
        throw ValidationError("repeated_interaction_check: zeta*tau = " + std::to_string(zt) +
                              " outside the perturbative regime (<= 0.3)");

    const Eigen::MatrixXcd u = pass_unitary(h, p.tau);

    RepeatedInteractionResult result;
    result.times.resize(n_atoms + 1);
    result.populations.resize(n_atoms + 1, d);

    Eigen::MatrixXcd rho_mode = Eigen::MatrixXcd::Zero(d, d);
    rho_mode(source, source) = 1.0;
    const int atom_index = atom == AtomState::excited ? 1 : 0;

    result.times(0) = 0.0;
    result.populations.row(0) = rho_mode.diagonal().real().transpose();

    Eigen::MatrixXcd joint(2 * d, 2 * d);
    for (int k = 1; k <= n_atoms; ++k) {
        joint.setZero();
        for (int n = 0; n < d; ++n)
            for (int m = 0; m < d; ++m)
                joint(n * 2 + atom_index, m * 2 + atom_index) = rho_mode(n, m);
        joint = u * joint * u.adjoint();
        for (int n = 0; n < d; ++n)
            for (int m = 0; m < d; ++m)
                rho_mode(n, m) = joint(n * 2, m * 2) + joint(n * 2 + 1, m * 2 + 1);
        result.times(k) = static_cast<double>(k) / p.r;
        result.populations.row(k) = rho_mode.diagonal().real().transpose();
    }

    // Through-origin fit of -ln p_source(t) = Gamma t.
    double st2 = 0.0, sty = 0.0;
    std::vector<double> ts, ys;
    for (int k = 1; k <= n_atoms; ++k) {
        const double ps = result.populations(k, source);
        if (ps < 1e-12) break;
        const double y = -std::log(ps);
        ts.push_back(result.times(k));
        ys.push_back(y);
        st2 += result.times(k) * result.times(k);
        sty += result.times(k) * y;
    }
    if (ts.size() < 5) throw FitError("repeated_interaction_check: too few usable points");
    const double slope = sty / st2;
    double mean = 0.0;
    for (double y : ys) mean += y;
    mean /= static_cast<double>(ys.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        ss_res += (ys[i] - slope * ts[i]) * (ys[i] - slope * ts[i]);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    if (ss_tot < 1e-24)
        throw FitError("repeated_interaction_check: no population transfer observed");
    result.r_squared = 1.0 - ss_res / ss_tot;
    if (result.r_squared < 0.95)
        throw FitError("repeated_interaction_check: transfer is not exponential (R^2 = " +
                       std::to_string(result.r_squared) + ")");
    result.gamma_measured = slope;
    return result;
}

}  // namespace bosonet
