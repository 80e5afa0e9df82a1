// Master-equation time evolution (fixed-step classical RK4 on vec(rho)),
// steady-state extraction, and the fidelity/purity/occupation observables.

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "bosonet/liouvillian.hpp"
#include "bosonet/states.hpp"

namespace bosonet {

struct EvolveOptions {
    double t_final = 50.0;
    // Step size; <= 0 selects the conservative default 1e-3 / (largest total
    // rate on any mode).
    double dt = 0.0;
    int max_outputs = 200;
    bool store_states = false;
    // Stop early once max|L[rho]| falls below this (0 disables the check).
    double steady_stop_tol = 0.0;
    double trace_tol = 1e-8;
    double negativity_tol = 1e-6;
    // How often the step size may be halved after an instability before the
    // run is abandoned.
    int max_halvings = 3;
    std::optional<StateVector> fidelity_target;
};

struct Trajectory {
    std::vector<double> times;     // gamma*t, strictly increasing
    std::vector<double> fidelity;  // empty without a target
    std::vector<double> purity;
    Eigen::MatrixXd occupations;   // outputs x modes, <A_m^dag A_m>
    std::vector<DensityOperator> states;  // filled when store_states
    DensityOperator final_state;
    double dt_used = 0.0;
    double horizon = 0.0;          // last time actually integrated
    bool reached_steady = false;   // stopped by steady_stop_tol
};

Trajectory evolve(const Liouvillian& liou, const DensityOperator& rho0,
                  const EvolveOptions& options);
Trajectory evolve(const Liouvillian& liou, const DensityOperator& rho0, double t_final,
                  double dt);

struct SteadyStateOptions {
    double direct_tol = 1e-8;
    double integration_tol = 1e-6;
    // Direct null-space solve while rho has at most this many entries (D^2).
    long direct_max_entries = 40000;
    double t_max = 200.0;
    std::optional<DensityOperator> hint;  // integration start; maximally mixed otherwise
};

struct SteadyStateResult {
    DensityOperator rho_ss;
    double residual;     // max|L[rho_ss]|, computed matrix-free
    std::string method;  // "direct_nullspace" or "integration"
    bool unique = true;  // false when a degenerate fixed-point manifold was detected
};

SteadyStateResult steady_state(const Liouvillian& liou,
                               const SteadyStateOptions& options = {});

// F = sqrt(<psi|rho|psi>), the square-root convention.
double fidelity(const DensityOperator& rho, const StateVector& target);

// Tr rho^2.
double purity(const DensityOperator& rho);

// <A_m^dag A_m> per mode.
Eigen::VectorXd mean_occupations(const TruncatedSpace& space, const DensityOperator& rho);

// Trace norm (sum of singular values); used for state-distance checks.
double trace_norm(const Eigen::MatrixXcd& a);

}  // namespace bosonet
