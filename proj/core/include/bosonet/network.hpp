// Coupled-oscillator networks and their normal-mode decomposition.
//
// A network of N lossy bosonic modes is described in the natural basis by
// NetworkSpec (frequencies, couplings, loss rates, thermal occupations).
// Diagonalizing the one-excitation coupling matrix H (H_mm = omega_m,
// H_mn = lambda_mn) yields the orthogonal transformation C whose rows are
// the normal modes A_m = sum_n C_mn a_n.

#pragma once

#include <Eigen/Dense>

#include <utility>

#include "bosonet/errors.hpp"

namespace bosonet {

struct NetworkSpec {
    Eigen::VectorXd omega;   // mode frequencies, units of the reference rate
    Eigen::MatrixXd lambda;  // symmetric coupling matrix, zero diagonal
    Eigen::VectorXd gamma;   // natural loss rates, >= 0
    Eigen::VectorXd nbar;    // reservoir thermal occupations, >= 0

    int n_modes() const { return static_cast<int>(omega.size()); }

    // Throws ValidationError on asymmetric lambda, nonzero diagonal,
    // negative rates/occupations, or non-finite frequencies.
    void validate() const;

    // All-identical network, fully connected: omega_m = omega, lambda_mn = lambda.
    static NetworkSpec symmetric(int n, double omega, double lambda, double gamma,
                                 double nbar);

    // Nearest-neighbour chain with uniform coupling.
    static NetworkSpec chain(int n, double omega, double lambda, double gamma,
                             double nbar);
};

struct NormalModeBasis {
    Eigen::MatrixXd C;          // orthogonal; row m = eigenvector of normal mode m
    Eigen::VectorXd omega_bar;  // normal-mode frequencies, descending
    Eigen::VectorXd gamma_bar;  // effective loss rates (empty until transform_rates)
    Eigen::VectorXd nbar_bar;   // effective occupations (empty until transform_rates)

    int n_modes() const { return static_cast<int>(C.rows()); }
};

// H_mm = omega_m, H_mn = lambda_mn (m != n).
Eigen::MatrixXd build_coupling_matrix(const NetworkSpec& spec);

// Eigen-decomposition of a symmetric coupling matrix. Rows of C are ordered by
// descending eigenvalue; within a degenerate block rows are sign-fixed (first
// nonzero component positive) and sorted lexicographically, except that the
// fully symmetric network uses the closed-form basis of symmetric_basis().
NormalModeBasis diagonalize(const Eigen::MatrixXd& H);

// Closed-form basis for the fully symmetric network:
//   row 1 = (1,...,1)/sqrt(N),
//   row j = (1,...,1,-(j-1),0,...,0)/sqrt(j(j-1)),  j = 2..N.
// omega_bar is filled from the analytic spectrum {omega+(N-1)lambda,
// omega-lambda (N-1 times)} for the given parameters (zero by default).
NormalModeBasis symmetric_basis(int n, double omega = 0.0, double lambda = 0.0);

// Effective normal-mode loss rates and occupations. For a nondegenerate
// spectrum gamma_bar_m = sum_n C_mn^2 gamma_n (equal reservoirs give gamma
// back). A degenerate fully symmetric network collects all natural loss in
// the collective mode: gamma_bar = N*gamma there and 0 elsewhere. Degenerate
// spectra with unequal gamma_m are not defined by the model and throw
// UnsupportedConfigError.
std::pair<Eigen::VectorXd, Eigen::VectorXd> transform_rates(const NetworkSpec& spec,
                                                            const NormalModeBasis& basis);

// build_coupling_matrix + diagonalize + transform_rates in one call.
NormalModeBasis normal_modes(const NetworkSpec& spec);

}  // namespace bosonet
