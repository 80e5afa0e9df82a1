#include "bosonet/states.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace bosonet {

namespace {

constexpr double kPi = 3.14159265358979323846;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

TruncatedSpace::TruncatedSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) throw ValidationError("TruncatedSpace: need at least one mode");
    for (int d : cutoffs_)
        if (d < 2) throw ValidationError("TruncatedSpace: every cutoff must be >= 2");
    strides_.assign(cutoffs_.size(), 1);
    for (int m = static_cast<int>(cutoffs_.size()) - 2; m >= 0; --m)
        strides_[m] = strides_[m + 1] * cutoffs_[m + 1];
    dim_ = strides_[0] * cutoffs_[0];
}

long TruncatedSpace::flat_index(const std::vector<int>& multi) const {
    if (multi.size() != cutoffs_.size())
        throw ValidationError("TruncatedSpace: multi-index has wrong length");
    long flat = 0;
    for (std::size_t m = 0; m < multi.size(); ++m) {
        if (multi[m] < 0 || multi[m] >= cutoffs_[m])
            throw ValidationError("TruncatedSpace: occupation outside cutoff");
        flat += multi[m] * strides_[m];
    }
    return flat;
}

std::vector<int> TruncatedSpace::multi_index(long flat) const {
    if (flat < 0 || flat >= dim_) throw ValidationError("TruncatedSpace: flat index out of range");
    std::vector<int> multi(cutoffs_.size());
    for (std::size_t m = 0; m < cutoffs_.size(); ++m)
        multi[m] = static_cast<int>((flat / strides_[m]) % cutoffs_[m]);
    return multi;
}

double DensityOperator::hermiticity_defect() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        0.5 * (matrix + matrix.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityOperator::validate(double herm_tol, double trace_tol, double eig_tol) const {
    if (hermiticity_defect() > herm_tol)
        throw ValidationError("DensityOperator: not Hermitian");
    if (std::abs(trace_real() - 1.0) > trace_tol)
        throw ValidationError("DensityOperator: trace differs from 1");
    if (min_eigenvalue() < -eig_tol)
        throw ValidationError("DensityOperator: negative eigenvalue beyond tolerance");
}

DensityOperator pure_state(const StateVector& psi) {
    DensityOperator rho;
    rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
    rho.basis = psi.basis;
    return rho;
}

SparseC embed_operator(const TruncatedSpace& space, int mode,
                       const Eigen::MatrixXcd& op) {
    if (mode < 0 || mode >= space.n_modes())
        throw ValidationError("embed_operator: mode index out of range");
    const int d = space.cutoff(mode);
    if (op.rows() != d || op.cols() != d)
        throw ValidationError("embed_operator: operator does not match mode cutoff");
    const long stride = space.stride(mode);
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (long f = 0; f < space.dim(); ++f) {
        const int n = space.level(f, mode);
        for (int r = 0; r < d; ++r) {
            if (op(r, n) != Complex(0.0, 0.0))
                triplets.emplace_back(f + (r - n) * stride, f, op(r, n));
        }
    }
    SparseC out(space.dim(), space.dim());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

std::pair<SparseC, SparseC> ladder_ops(const TruncatedSpace& space, int mode) {
    if (mode < 0 || mode >= space.n_modes())
        throw ValidationError("ladder_ops: mode index out of range");
    const int d = space.cutoff(mode);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {embed_operator(space, mode, a),
            embed_operator(space, mode, a.adjoint())};
}

SparseC number_op(const TruncatedSpace& space, int mode) {
    const int d = space.cutoff(mode);
    Eigen::MatrixXcd num = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n) num(n, n) = static_cast<double>(n);
    return embed_operator(space, mode, num);
}

std::pair<SparseC, SparseC> selective_ops(const TruncatedSpace& space, int mode, int ell) {
    if (mode < 0 || mode >= space.n_modes())
        throw ValidationError("selective_ops: mode index out of range");
    if (ell < 0) throw ValidationError("selective_ops: ell must be >= 0");
    if (ell + 1 >= space.cutoff(mode))
        throw ValidationError("selective_ops: ell+1 must lie below the mode cutoff");
    const int d = space.cutoff(mode);
    Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(d, d);
    lower(ell, ell + 1) = 1.0;
    return {embed_operator(space, mode, lower),
            embed_operator(space, mode, lower.adjoint())};
}

DensityOperator thermal_state(const TruncatedSpace& space, const Eigen::VectorXd& nbar,
                              Basis basis) {
    const int n_modes = space.n_modes();
    if (nbar.size() != n_modes)
        throw ValidationError("thermal_state: nbar must have one entry per mode");
    for (int m = 0; m < n_modes; ++m)
        if (nbar(m) < 0.0) throw ValidationError("thermal_state: nbar must be non-negative");

    // Per-mode geometric weights, renormalized over the truncation.
    std::vector<Eigen::VectorXd> weights(n_modes);
    for (int m = 0; m < n_modes; ++m) {
        const int d = space.cutoff(m);
        const double q = nbar(m) / (1.0 + nbar(m));
        Eigen::VectorXd w(d);
        double pw = 1.0;
        for (int n = 0; n < d; ++n) {
            w(n) = pw;
            pw *= q;
        }
        weights[m] = w / w.sum();
    }

    DensityOperator rho;
    rho.basis = basis;
    rho.matrix = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    for (long f = 0; f < space.dim(); ++f) {
        double p = 1.0;
        for (int m = 0; m < n_modes; ++m) p *= weights[m](space.level(f, m));
        rho.matrix(f, f) = p;
    }
    return rho;
}

DensityOperator thermal_state(const TruncatedSpace& space, double nbar, Basis basis) {
    return thermal_state(space, Eigen::VectorXd::Constant(space.n_modes(), nbar), basis);
}

TargetKind target_kind_from_string(const std::string& name) {
    if (name == "bell_plus") return TargetKind::bell_plus;
    if (name == "bell_minus") return TargetKind::bell_minus;
    if (name == "noon") return TargetKind::noon;
    if (name == "w") return TargetKind::w;
    if (name == "linear_chain") return TargetKind::linear_chain;
    throw ValidationError("unknown target state kind: " + name);
}

std::string to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::bell_plus: return "bell_plus";
        case TargetKind::bell_minus: return "bell_minus";
        case TargetKind::noon: return "noon";
        case TargetKind::w: return "w";
        case TargetKind::linear_chain: return "linear_chain";
    }
    throw ValidationError("unknown target state kind");
}

TargetState target_state(const TruncatedSpace& space, TargetKind kind, int branch) {
    const int n = space.n_modes();
    const long dim = space.dim();
    TargetState target;
    target.normal.basis = Basis::normal;
    target.natural.basis = Basis::natural;
    target.normal.amplitudes = Eigen::VectorXcd::Zero(dim);
    target.natural.amplitudes = Eigen::VectorXcd::Zero(dim);

    auto single_excitation = [&](int mode) {
        std::vector<int> multi(n, 0);
        multi[mode] = 1;
        return space.flat_index(multi);
    };

    switch (kind) {
        case TargetKind::bell_plus:
        case TargetKind::bell_minus: {
            if (n != 2) throw ValidationError("target_state: Bell states need two modes");
            const double inv = 1.0 / std::sqrt(2.0);
            target.normal.amplitudes(single_excitation(kind == TargetKind::bell_plus ? 0 : 1)) = 1.0;
            target.natural.amplitudes(single_excitation(0)) = inv;
            target.natural.amplitudes(single_excitation(1)) =
                kind == TargetKind::bell_plus ? inv : -inv;
            break;
        }
        case TargetKind::noon: {
            if (n != 2) throw ValidationError("target_state: the NOON state needs two modes");
            if (space.cutoff(0) < 3 || space.cutoff(1) < 3)
                throw ValidationError("target_state: NOON needs cutoffs >= 3");
            target.normal.amplitudes(space.flat_index({1, 1})) = 1.0;
            const double inv = 1.0 / std::sqrt(2.0);
            target.natural.amplitudes(space.flat_index({2, 0})) = inv;
            target.natural.amplitudes(space.flat_index({0, 2})) = -inv;
            break;
        }
        case TargetKind::w: {
            if (n < 2) throw ValidationError("target_state: W states need at least two modes");
            target.normal.amplitudes(single_excitation(0)) = 1.0;
            const double inv = 1.0 / std::sqrt(static_cast<double>(n));
            for (int k = 0; k < n; ++k) target.natural.amplitudes(single_excitation(k)) = inv;
            break;
        }
        case TargetKind::linear_chain: {
            if (branch < 1 || branch > n)
                throw ValidationError("target_state: chain branch must lie in 1..N");
            target.normal.amplitudes(single_excitation(branch - 1)) = 1.0;
            const double norm = std::sqrt(2.0 / (n + 1));
            for (int k = 1; k <= n; ++k)
                target.natural.amplitudes(single_excitation(k - 1)) =
                    norm * std::sin(branch * kPi * k / (n + 1));
            break;
        }
    }
    return target;
}

StateVector to_natural_basis(const NormalModeBasis& basis, const TruncatedSpace& space,
                             const StateVector& psi, int excitation_limit) {
    const int n = space.n_modes();
    if (basis.n_modes() != n)
        throw ValidationError("to_natural_basis: basis and space dimensions differ");
    if (psi.basis != Basis::normal)
        throw ValidationError("to_natural_basis: input must be tagged normal");
    if (psi.amplitudes.size() != space.dim())
        throw ValidationError("to_natural_basis: state does not match space");

    // Natural creation operators and the normal-mode combinations
    // A_m^dag = sum_n C_mn a_n^dag.
    std::vector<SparseC> normal_raising(n);
    {
        std::vector<SparseC> natural_raising(n);
        for (int k = 0; k < n; ++k) natural_raising[k] = ladder_ops(space, k).second;
        for (int m = 0; m < n; ++m) {
            SparseC acc(space.dim(), space.dim());
            for (int k = 0; k < n; ++k)
                acc = acc + SparseC(basis.C(m, k) * natural_raising[k]);
            normal_raising[m] = acc;
        }
    }

    StateVector out;
    out.basis = Basis::natural;
    out.amplitudes = Eigen::VectorXcd::Zero(space.dim());
    for (long f = 0; f < space.dim(); ++f) {
        const Complex c = psi.amplitudes(f);
        if (c == Complex(0.0, 0.0)) continue;
        const std::vector<int> multi = space.multi_index(f);
        int excitation = 0;
        for (int v : multi) excitation += v;
        if (excitation > excitation_limit)
            throw UnsupportedConfigError(
                "to_natural_basis: total excitation exceeds the configured limit");
        for (int m = 0; m < n; ++m)
            if (excitation >= space.cutoff(m))
                throw UnsupportedConfigError(
                    "to_natural_basis: cutoffs too small to hold the expanded state exactly");

        Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(space.dim());
        vec(0) = 1.0;  // vacuum
        for (int m = 0; m < n; ++m) {
            for (int k = 0; k < multi[m]; ++k) vec = normal_raising[m] * vec;
        }
        double norm = 1.0;
        for (int m = 0; m < n; ++m) norm *= factorial(multi[m]);
        out.amplitudes += c / std::sqrt(norm) * vec;
    }
    return out;
}

}  // namespace bosonet
