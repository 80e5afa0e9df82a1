// Truncated multimode Fock spaces, ladder and selective operators, thermal
// and target states, and the normal <-> natural basis map for few-excitation
// states.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "bosonet/errors.hpp"
#include "bosonet/network.hpp"

namespace bosonet {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;

enum class Basis { normal, natural };

// Tensor product of per-mode Fock spaces truncated at d_m levels. Mode 0 is
// the most significant factor: flat = n_0 * d_1 * ... * d_{N-1} + ... + n_{N-1},
// so an operator on mode 0 embeds as M (x) I (x) ... (x) I.
class TruncatedSpace {
public:
    TruncatedSpace() = default;  // empty placeholder; assign before use
    explicit TruncatedSpace(std::vector<int> cutoffs);

    int n_modes() const { return static_cast<int>(cutoffs_.size()); }
    long dim() const { return dim_; }
    int cutoff(int mode) const { return cutoffs_.at(static_cast<std::size_t>(mode)); }
    const std::vector<int>& cutoffs() const { return cutoffs_; }
    long stride(int mode) const { return strides_.at(static_cast<std::size_t>(mode)); }

    long flat_index(const std::vector<int>& multi) const;
    std::vector<int> multi_index(long flat) const;
    // Occupation of one mode in the flat-indexed basis state.
    int level(long flat, int mode) const {
        return static_cast<int>((flat / stride(mode)) % cutoff(mode));
    }

private:
    std::vector<int> cutoffs_;
    std::vector<long> strides_;
    long dim_ = 0;
};

struct StateVector {
    Eigen::VectorXcd amplitudes;
    Basis basis = Basis::normal;

    double norm() const { return amplitudes.norm(); }
};

struct DensityOperator {
    Eigen::MatrixXcd matrix;
    Basis basis = Basis::normal;

    long dim() const { return matrix.rows(); }
    double trace_real() const { return matrix.trace().real(); }
    double hermiticity_defect() const;  // max |rho - rho^dag|
    double min_eigenvalue() const;

    // Hermitian to 1e-10, trace 1 to 1e-8, min eigenvalue >= -1e-8.
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-8,
                  double eig_tol = 1e-8) const;
};

DensityOperator pure_state(const StateVector& psi);

// Embed a single-mode operator into the full space by tensor product.
SparseC embed_operator(const TruncatedSpace& space, int mode,
                       const Eigen::MatrixXcd& single_mode_op);

// Truncated ladder pair (a, a^dag) for one mode; a|n> = sqrt(n)|n-1>.
std::pair<SparseC, SparseC> ladder_ops(const TruncatedSpace& space, int mode);
SparseC number_op(const TruncatedSpace& space, int mode);

// Selective pair (A_ell, A_ell^dag) with A_ell = |ell><ell+1| on one mode.
std::pair<SparseC, SparseC> selective_ops(const TruncatedSpace& space, int mode, int ell);

// Product of single-mode geometric distributions p_n ~ (nbar/(1+nbar))^n,
// renormalized over the truncation so the trace is exactly 1.
DensityOperator thermal_state(const TruncatedSpace& space, const Eigen::VectorXd& nbar,
                              Basis basis = Basis::normal);
DensityOperator thermal_state(const TruncatedSpace& space, double nbar,
                              Basis basis = Basis::normal);

enum class TargetKind { bell_plus, bell_minus, noon, w, linear_chain };

TargetKind target_kind_from_string(const std::string& name);
std::string to_string(TargetKind kind);

struct TargetState {
    StateVector normal;   // Fock product state in the normal-mode basis
    StateVector natural;  // its entangled image in the natural basis
};

// branch selects the excited normal mode for linear_chain (1..N); ignored
// otherwise.
TargetState target_state(const TruncatedSpace& space, TargetKind kind, int branch = 1);

// Expand a normal-basis Fock state via A_m^dag = sum_n C_mn a_n^dag applied to
// the vacuum. Exact while the total excitation fits every mode cutoff; states
// above excitation_limit are rejected (combinatorial guard).
StateVector to_natural_basis(const NormalModeBasis& basis, const TruncatedSpace& space,
                             const StateVector& psi, int excitation_limit = 4);

}  // namespace bosonet
