#include "bosonet/dynamics.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bosonet {

namespace {

// Internal marker: the current step size produced an unstable run.
struct Unstable {
    std::string reason;
};

std::string format_dt(double dt) {
    std::ostringstream out;
    out << dt;
    return out.str();
}

Eigen::VectorXd diagonal_populations(const Eigen::MatrixXcd& rho) {
    return rho.diagonal().real();
}

Trajectory integrate_once(const Liouvillian& liou, const DensityOperator& rho0,
                          const EvolveOptions& opts, double dt) {
    const long dim = liou.dim();
    const long super = liou.super_dim();
    const bool use_matrix = super <= (1L << 20);
    const SparseC* lmat = use_matrix ? &liou.matrix() : nullptr;

    const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(opts.t_final / dt)));
    const double step = opts.t_final / static_cast<double>(n_steps);
    const long out_every =
        std::max<long>(1, (n_steps + opts.max_outputs - 2) / std::max(1, opts.max_outputs - 1));

    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.matrix.data(), super);
    Eigen::VectorXcd k1(super), k2(super), k3(super), k4(super), tmp(super);

    auto rhs = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
        if (use_matrix) {
            out.noalias() = (*lmat) * x;
        } else {
            Eigen::Map<const Eigen::MatrixXcd> rho(x.data(), dim, dim);
            Eigen::MatrixXcd drho = liou.apply(rho);
            out = Eigen::Map<const Eigen::VectorXcd>(drho.data(), super);
        }
    };

    Trajectory traj;
    traj.dt_used = step;
    traj.occupations.resize(0, liou.space().n_modes());

    auto record = [&](double t, const Eigen::VectorXcd& x) {
        Eigen::Map<const Eigen::MatrixXcd> rho_map(x.data(), dim, dim);
        DensityOperator rho{rho_map, rho0.basis};

        const double trace = rho.trace_real();
        if (!std::isfinite(trace) || std::abs(trace - 1.0) > opts.trace_tol)
            throw Unstable{"trace drift " + std::to_string(trace - 1.0)};
        if (rho.min_eigenvalue() < -opts.negativity_tol)
            throw Unstable{"negative eigenvalue beyond tolerance"};

        traj.times.push_back(t);
        if (opts.fidelity_target) traj.fidelity.push_back(fidelity(rho, *opts.fidelity_target));
        traj.purity.push_back(purity(rho));
        traj.occupations.conservativeResize(traj.occupations.rows() + 1, Eigen::NoChange);
        traj.occupations.row(traj.occupations.rows() - 1) =
            mean_occupations(liou.space(), rho).transpose();
        if (opts.store_states) traj.states.push_back(rho);

        traj.final_state = std::move(rho);
        traj.horizon = t;
        if (opts.steady_stop_tol > 0.0 &&
            liou.residual_max(traj.final_state) < opts.steady_stop_tol) {
            traj.reached_steady = true;
            return false;
        }
        return true;
    };

    if (!record(0.0, v)) return traj;
    for (long s = 1; s <= n_steps; ++s) {
        rhs(v, k1);
        tmp = v + (0.5 * step) * k1;
        rhs(tmp, k2);
        tmp = v + (0.5 * step) * k2;
        rhs(tmp, k3);
        tmp = v + step * k3;
        rhs(tmp, k4);
        v += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (s % out_every == 0 || s == n_steps) {
            if (!record(s * step, v)) return traj;
        }
    }
    return traj;
}

DensityOperator maximally_mixed(long dim, Basis basis) {
    DensityOperator rho;
    rho.basis = basis;
    rho.matrix = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
    return rho;
}

// Null-space solve with one diagonal row of L replaced by the trace
// functional. Any single diagonal row is redundant (they sum to zero since
// Tr L[rho] = 0), so the replacement keeps the full generator information.
std::optional<Eigen::MatrixXcd> direct_null_solve(const Liouvillian& liou,
                                                  long constraint_diag) {
    const long dim = liou.dim();
    const long super = liou.super_dim();
    const long constraint_row = constraint_diag * (dim + 1);

    std::vector<Eigen::Triplet<Complex>> triplets;
    const SparseC& lmat = liou.matrix();
    triplets.reserve(static_cast<std::size_t>(lmat.nonZeros()) + dim);
    for (int col = 0; col < lmat.outerSize(); ++col) {
        for (SparseC::InnerIterator it(lmat, col); it; ++it) {
            if (it.row() != constraint_row) triplets.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (long i = 0; i < dim; ++i)
        triplets.emplace_back(constraint_row, i * (dim + 1), Complex(1.0, 0.0));

    SparseC system(super, super);
    system.setFromTriplets(triplets.begin(), triplets.end());
    system.makeCompressed();

    Eigen::SparseLU<SparseC> solver;
    solver.compute(system);
    if (solver.info() != Eigen::Success) return std::nullopt;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(super);
    rhs(constraint_row) = 1.0;
    Eigen::VectorXcd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success || !x.allFinite()) return std::nullopt;

    Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(x.data(), dim, dim);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double trace = rho.trace().real();
    if (std::abs(trace) < 1e-12) return std::nullopt;
    rho /= trace;
    return rho;
}

}  // namespace

Trajectory evolve(const Liouvillian& liou, const DensityOperator& rho0,
                  const EvolveOptions& opts) {
    if (rho0.dim() != liou.dim())
        throw ValidationError("evolve: initial state does not match the generator");
    if (opts.t_final <= 0.0) throw ValidationError("evolve: t_final must be positive");
    rho0.validate(1e-9, 1e-7, 1e-6);
    if (opts.fidelity_target) {
        if (opts.fidelity_target->basis != rho0.basis)
            throw ValidationError("evolve: target and state basis tags differ");
        if (std::abs(opts.fidelity_target->norm() - 1.0) > 1e-8)
            throw ValidationError("evolve: fidelity target must be normalized");
    }

    double dt = opts.dt > 0.0 ? opts.dt : 1e-3 / liou.max_mode_rate();
    std::string last_reason;
    for (int attempt = 0; attempt <= opts.max_halvings; ++attempt) {
        try {
            return integrate_once(liou, rho0, opts, dt);
        } catch (const Unstable& u) {
            last_reason = u.reason;
            dt *= 0.5;
        }
    }
    throw IntegrationError("evolve: instability (" + last_reason + ") persisted down to dt=" +
                           format_dt(dt * 2.0));
}

Trajectory evolve(const Liouvillian& liou, const DensityOperator& rho0, double t_final,
                  double dt) {
    EvolveOptions opts;
    opts.t_final = t_final;
    opts.dt = dt;
    return evolve(liou, rho0, opts);
}

SteadyStateResult steady_state(const Liouvillian& liou, const SteadyStateOptions& opts) {
    const long dim = liou.dim();
    bool degenerate_manifold = false;

    if (dim * dim <= opts.direct_max_entries) {
        auto first = direct_null_solve(liou, 0);
        auto second = direct_null_solve(liou, dim - 1);
        if (first && second) {
            const double diff = (*first - *second).cwiseAbs().maxCoeff();
            if (diff <= 1e-6) {
                DensityOperator rho{*first, opts.hint ? opts.hint->basis : Basis::normal};
                const double residual = liou.residual_max(rho);
                if (residual <= opts.direct_tol)
                    return {std::move(rho), residual, "direct_nullspace", true};
            } else {
                degenerate_manifold = true;
            }
        } else {
            // Singular after removing one redundant row: null space has
            // dimension > 1.
            degenerate_manifold = true;
        }
    }

    // Long-time integration; from the caller's state this returns the
    // projection of that state onto the fixed-point manifold.
    DensityOperator start =
        opts.hint ? *opts.hint : maximally_mixed(dim, Basis::normal);
    EvolveOptions eopts;
    eopts.t_final = opts.t_max;
    eopts.dt = 2e-2 / liou.max_mode_rate();
    eopts.steady_stop_tol = opts.integration_tol;
    eopts.max_outputs = 400;
    Trajectory traj = evolve(liou, start, eopts);

    DensityOperator rho = traj.final_state;
    rho.matrix = (0.5 * (rho.matrix + rho.matrix.adjoint())).eval();
    rho.matrix /= rho.matrix.trace().real();
    const double residual = liou.residual_max(rho);
    if (residual > opts.integration_tol)
        throw IntegrationError("steady_state: residual " + std::to_string(residual) +
                               " above tolerance after t=" + std::to_string(traj.horizon));
    return {std::move(rho), residual, "integration", !degenerate_manifold};
}

double fidelity(const DensityOperator& rho, const StateVector& target) {
    if (rho.basis != target.basis)
        throw ValidationError("fidelity: state and target basis tags differ");
    if (rho.dim() != target.amplitudes.size())
        throw ValidationError("fidelity: dimension mismatch");
    if (std::abs(target.norm() - 1.0) > 1e-8)
        throw ValidationError("fidelity: target must be normalized");
    const double overlap =
        (target.amplitudes.adjoint() * rho.matrix * target.amplitudes)(0).real();
    return std::sqrt(std::clamp(overlap, 0.0, 1.0));
}

double purity(const DensityOperator& rho) {
    return (rho.matrix * rho.matrix).trace().real();
}

Eigen::VectorXd mean_occupations(const TruncatedSpace& space, const DensityOperator& rho) {
    const Eigen::VectorXd pops = diagonal_populations(rho.matrix);
    Eigen::VectorXd occ = Eigen::VectorXd::Zero(space.n_modes());
    for (long f = 0; f < space.dim(); ++f)
        for (int m = 0; m < space.n_modes(); ++m) occ(m) += space.level(f, m) * pops(f);
    return occ;
}

double trace_norm(const Eigen::MatrixXcd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues().sum();
}

}  // namespace bosonet
