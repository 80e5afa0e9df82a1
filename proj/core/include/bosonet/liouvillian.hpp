// Lindblad generators in the normal-mode basis: natural thermal dissipators,
// engineered selective emission/absorption, cooling, and the optional
// coherent term. The generator is available both matrix-free (action on a
// density matrix) and as an assembled sparse superoperator on column-stacked
// vec(rho).

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <string>
#include <vector>

#include "bosonet/network.hpp"
#include "bosonet/states.hpp"

namespace bosonet {

enum class ChannelKind {
    thermal_emission,     // jump a_m,      rate gamma_m (1 + nbar_m)
    thermal_absorption,   // jump a_m^dag,  rate gamma_m nbar_m
    selective_emission,   // jump |l><l+1|, rate Gamma_ml
    selective_absorption, // jump |l+1><l|, rate Gamma_ml'
    cooling,              // jump a_m,      rate Gamma_m
};

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& name);

struct ChannelSpec {
    int mode = 0;
    ChannelKind kind = ChannelKind::thermal_emission;
    int ell = 0;        // selective subspace index; ignored for other kinds
    double rate = 0.0;  // full Lindblad prefactor, units of the reference rate
};

struct GeneratorSpec {
    TruncatedSpace space;
    std::vector<ChannelSpec> channels;
    Eigen::VectorXd omega_bar;          // normal-mode frequencies for H-bar
    bool include_hamiltonian = false;   // default: rotating frame of H-bar

    void validate() const;
};

// Superoperator of a single dissipator rho -> (rate/2)(2 J rho J^dag
// - rho J^dag J - J^dag J rho), column-stacking convention.
SparseC dissipator(const SparseC& jump, double rate);

class Liouvillian {
public:
    explicit Liouvillian(GeneratorSpec gen);

    long dim() const { return gen_.space.dim(); }
    long super_dim() const { return dim() * dim(); }
    const TruncatedSpace& space() const { return gen_.space; }
    const GeneratorSpec& generator() const { return gen_; }

    // Matrix-free action on a density matrix.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

    // Assembled sparse superoperator (built lazily, cached).
    const SparseC& matrix() const;

    // max_ij |L[rho]_ij|; the steady-state residual norm.
    double residual_max(const DensityOperator& rho) const;

    // Largest total outflow rate over modes; sets integration step defaults.
    double max_mode_rate() const;

private:
    GeneratorSpec gen_;
    std::vector<SparseC> jump_, jump_dag_, jdagj_;
    std::vector<double> rate_;
    SparseC hamiltonian_;
    mutable SparseC matrix_;
    mutable bool matrix_built_ = false;
};

inline Liouvillian assemble(GeneratorSpec gen) { return Liouvillian(std::move(gen)); }

// Thermal emission/absorption pairs for every mode carrying natural loss.
std::vector<ChannelSpec> thermal_channels(const Eigen::VectorXd& gamma_bar,
                                          const Eigen::VectorXd& nbar_bar);

// Preset generators matching the engineered master equations for the
// two-cavity Bell/NOON targets and the symmetric-network W target. Rates are
// in units of the natural rate gamma; thermal channels are added on every
// normal mode that carries natural loss.
GeneratorSpec bell_generator(double Gamma0, double gamma = 1.0, double nbar = 0.05,
                             std::vector<int> cutoffs = {4, 4});
GeneratorSpec bell_full_generator(double Gamma_plus1, double Gamma_plus0,
                                  double Gamma_minus, double gamma = 1.0,
                                  double nbar = 0.05, std::vector<int> cutoffs = {4, 4});
GeneratorSpec noon_generator(double Gamma_plus0, double Gamma_minus0,
                             double Gamma_plus1 = 0.0, double Gamma_minus1 = 0.0,
                             double gamma = 1.0, double nbar = 0.05,
                             std::vector<int> cutoffs = {4, 4});
GeneratorSpec w_generator(int n, double Gamma10, double Gamma_j, double gamma = 1.0,
                          double nbar = 0.05, std::vector<int> cutoffs = {});

}  // namespace bosonet
