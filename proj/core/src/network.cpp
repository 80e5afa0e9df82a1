#include "bosonet/network.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace bosonet {

namespace {

constexpr double kSymTol = 1e-12;

bool all_equal(const Eigen::VectorXd& v, double tol) {
    if (v.size() == 0) return true;
    return v.maxCoeff() - v.minCoeff() <= tol * std::max(1.0, v.cwiseAbs().maxCoeff());
}

// Fully symmetric network: all frequencies equal, all off-diagonal couplings
// equal and nonzero.
bool is_symmetric_network(const NetworkSpec& spec) {
    const int n = spec.n_modes();
    if (n < 2) return false;
    if (!all_equal(spec.omega, kSymTol)) return false;
    const double lam = spec.lambda(0, 1);
    if (lam == 0.0) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && std::abs(spec.lambda(i, j) - lam) > kSymTol * std::max(1.0, std::abs(lam)))
                return false;
    return true;
}

bool is_symmetric_network_matrix(const Eigen::MatrixXd& h) {
    const int n = static_cast<int>(h.rows());
    if (n < 2) return false;
    const double w = h(0, 0);
    const double lam = h(0, 1);
    if (lam == 0.0) return false;
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
        if (std::abs(h(i, i) - w) > kSymTol * scale) return false;
        for (int j = 0; j < n; ++j)
            if (i != j && std::abs(h(i, j) - lam) > kSymTol * scale) return false;
    }
    return true;
}

void fix_row_sign(Eigen::MatrixXd& c, int row) {
    for (int j = 0; j < c.cols(); ++j) {
        if (std::abs(c(row, j)) > 1e-12) {
            if (c(row, j) < 0.0) c.row(row) = -c.row(row);
            return;
        }
    }
}

bool lex_less(const Eigen::MatrixXd& c, int a, int b) {
    for (int j = 0; j < c.cols(); ++j) {
        const double d = c(a, j) - c(b, j);
        if (std::abs(d) > 1e-12) return d < 0.0;
    }
    return false;
}

}  // namespace

void NetworkSpec::validate() const {
    const int n = n_modes();
    if (n < 1) throw ValidationError("NetworkSpec: need at least one mode");
    if (lambda.rows() != n || lambda.cols() != n)
        throw ValidationError("NetworkSpec: lambda must be N x N");
    if (gamma.size() != n || nbar.size() != n)
        throw ValidationError("NetworkSpec: gamma and nbar must have length N");
    const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(omega(i))) throw ValidationError("NetworkSpec: omega must be finite");
        if (gamma(i) < 0.0) throw ValidationError("NetworkSpec: gamma must be non-negative");
        if (nbar(i) < 0.0) throw ValidationError("NetworkSpec: nbar must be non-negative");
        if (lambda(i, i) != 0.0) throw ValidationError("NetworkSpec: lambda diagonal must be zero");
        for (int j = i + 1; j < n; ++j)
            if (std::abs(lambda(i, j) - lambda(j, i)) > 1e-12 * scale)
                throw ValidationError("NetworkSpec: lambda must be symmetric");
    }
}

NetworkSpec NetworkSpec::symmetric(int n, double omega, double lambda, double gamma,
                                   double nbar) {
    NetworkSpec spec;
    spec.omega = Eigen::VectorXd::Constant(n, omega);
    spec.lambda = Eigen::MatrixXd::Constant(n, n, lambda);
    spec.lambda.diagonal().setZero();
    spec.gamma = Eigen::VectorXd::Constant(n, gamma);
    spec.nbar = Eigen::VectorXd::Constant(n, nbar);
    spec.validate();
    return spec;
}

NetworkSpec NetworkSpec::chain(int n, double omega, double lambda, double gamma,
                               double nbar) {
    NetworkSpec spec;
    spec.omega = Eigen::VectorXd::Constant(n, omega);
    spec.lambda = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        spec.lambda(i, i + 1) = lambda;
        spec.lambda(i + 1, i) = lambda;
    }
    spec.gamma = Eigen::VectorXd::Constant(n, gamma);
    spec.nbar = Eigen::VectorXd::Constant(n, nbar);
    spec.validate();
    return spec;
}

Eigen::MatrixXd build_coupling_matrix(const NetworkSpec& spec) {
    spec.validate();
    Eigen::MatrixXd h = spec.lambda;
    h.diagonal() = spec.omega;
    return h;
}

NormalModeBasis diagonalize(const Eigen::MatrixXd& h) {
    const int n = static_cast<int>(h.rows());
    if (n < 1 || h.cols() != n) throw ValidationError("diagonalize: matrix must be square");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ValidationError("diagonalize: matrix must be symmetric");

    // The fully symmetric network has an (N-1)-fold degenerate subspace; use
    // the closed-form basis there so output is reproducible.
    if (is_symmetric_network_matrix(h)) {
        const double w = h(0, 0);
        const double lam = h(0, 1);
        NormalModeBasis closed = symmetric_basis(n, w, lam);
        if (lam < 0.0) {
            // Degenerate block w - lam now lies above the collective mode.
            NormalModeBasis flipped;
            flipped.C.resize(n, n);
            flipped.omega_bar.resize(n);
            flipped.C.topRows(n - 1) = closed.C.bottomRows(n - 1);
            flipped.C.row(n - 1) = closed.C.row(0);
            flipped.omega_bar.head(n - 1) = closed.omega_bar.tail(n - 1);
            flipped.omega_bar(n - 1) = closed.omega_bar(0);
            return flipped;
        }
        return closed;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigen decomposition failed");

    NormalModeBasis basis;
    basis.C.resize(n, n);
    basis.omega_bar.resize(n);
    // Solver returns ascending eigenvalues; rows are wanted descending.
    for (int i = 0; i < n; ++i) {
        basis.omega_bar(i) = solver.eigenvalues()(n - 1 - i);
        basis.C.row(i) = solver.eigenvectors().col(n - 1 - i).transpose();
    }
    for (int i = 0; i < n; ++i) fix_row_sign(basis.C, i);

    // Deterministic order inside degenerate blocks: lexicographic by row.
    const double deg_tol = 1e-9 * std::max(1.0, basis.omega_bar.cwiseAbs().maxCoeff());
    int start = 0;
    while (start < n) {
        int stop = start + 1;
        while (stop < n && std::abs(basis.omega_bar(stop) - basis.omega_bar(start)) <= deg_tol)
            ++stop;
        if (stop - start > 1) {
            std::vector<int> order(stop - start);
            std::iota(order.begin(), order.end(), start);
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return lex_less(basis.C, a, b); });
            Eigen::MatrixXd block(stop - start, n);
            Eigen::VectorXd vals(stop - start);
            for (int k = 0; k < stop - start; ++k) {
                block.row(k) = basis.C.row(order[k]);
                vals(k) = basis.omega_bar(order[k]);
            }
            basis.C.middleRows(start, stop - start) = block;
            basis.omega_bar.segment(start, stop - start) = vals;
        }
        start = stop;
    }
    return basis;
}

NormalModeBasis symmetric_basis(int n, double omega, double lambda) {
    if (n < 2) throw ValidationError("symmetric_basis: need N >= 2");
    NormalModeBasis basis;
    basis.C = Eigen::MatrixXd::Zero(n, n);
    basis.C.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    for (int j = 2; j <= n; ++j) {
        const double norm = 1.0 / std::sqrt(static_cast<double>(j) * (j - 1));
        for (int k = 0; k < j - 1; ++k) basis.C(j - 1, k) = norm;
        basis.C(j - 1, j - 1) = -norm * (j - 1);
    }
    basis.omega_bar.resize(n);
    basis.omega_bar(0) = omega + (n - 1) * lambda;
    basis.omega_bar.tail(n - 1).setConstant(omega - lambda);
    return basis;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> transform_rates(const NetworkSpec& spec,
                                                            const NormalModeBasis& basis) {
    spec.validate();
    const int n = spec.n_modes();
    if (basis.n_modes() != n)
        throw ValidationError("transform_rates: spec and basis dimensions differ");

    bool degenerate = false;
    const double deg_tol = 1e-9 * std::max(1.0, basis.omega_bar.cwiseAbs().maxCoeff());
    for (int i = 0; i + 1 < n; ++i)
        if (std::abs(basis.omega_bar(i) - basis.omega_bar(i + 1)) <= deg_tol) degenerate = true;

    if (degenerate && !all_equal(spec.gamma, 1e-12))
        throw UnsupportedConfigError(
            "transform_rates: unequal loss rates with a degenerate spectrum are not defined");

    if (degenerate && is_symmetric_network(spec)) {
        // All natural loss is carried by the collective mode (1,...,1)/sqrt(N).
        const double g = spec.gamma(0);
        Eigen::VectorXd gamma_bar = Eigen::VectorXd::Zero(n);
        const double uniform = 1.0 / std::sqrt(static_cast<double>(n));
        int collective = 0;
        for (int m = 0; m < n; ++m) {
            if ((basis.C.row(m).cwiseAbs().array() - uniform).abs().maxCoeff() < 1e-9) {
                collective = m;
                break;
            }
        }
        gamma_bar(collective) = n * g;
        return {gamma_bar, spec.nbar};
    }

    // Cross-decay between normal modes is null; each normal mode sees the
    // reservoirs weighted by its squared components.
    Eigen::VectorXd gamma_bar(n), nbar_bar(n);
    for (int m = 0; m < n; ++m) {
        double g = 0.0, flux = 0.0;
        for (int k = 0; k < n; ++k) {
            const double w = basis.C(m, k) * basis.C(m, k);
            g += w * spec.gamma(k);
            flux += w * spec.gamma(k) * spec.nbar(k);
        }
        gamma_bar(m) = g;
        nbar_bar(m) = g > 0.0 ? flux / g : 0.0;
    }
    return {gamma_bar, nbar_bar};
}

NormalModeBasis normal_modes(const NetworkSpec& spec) {
    NormalModeBasis basis = diagonalize(build_coupling_matrix(spec));
    auto [gamma_bar, nbar_bar] = transform_rates(spec, basis);
    basis.gamma_bar = std::move(gamma_bar);
    basis.nbar_bar = std::move(nbar_bar);
    return basis;
}

}  // namespace bosonet
