#include "bosonet/liouvillian.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <utility>

namespace bosonet {

namespace {

SparseC sparse_identity(long dim) {
    SparseC id(dim, dim);
    id.setIdentity();
    return id;
}

// vec(A X B) = kron(B^T, A) vec(X) for column-stacked vec.
SparseC left_right_product(const SparseC& a, const SparseC& b) {
    SparseC bt = SparseC(b.transpose());
    return Eigen::kroneckerProduct(bt, a).eval();
}

}  // namespace

std::string to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::thermal_emission: return "thermal_emission";
        case ChannelKind::thermal_absorption: return "thermal_absorption";
        case ChannelKind::selective_emission: return "selective_emission";
        case ChannelKind::selective_absorption: return "selective_absorption";
        case ChannelKind::cooling: return "cooling";
    }
    throw ValidationError("unknown channel kind");
}

ChannelKind channel_kind_from_string(const std::string& name) {
    if (name == "thermal_emission") return ChannelKind::thermal_emission;
    if (name == "thermal_absorption") return ChannelKind::thermal_absorption;
    if (name == "selective_emission") return ChannelKind::selective_emission;
    if (name == "selective_absorption") return ChannelKind::selective_absorption;
    if (name == "cooling") return ChannelKind::cooling;
    throw ValidationError("unknown channel kind: " + name);
}

void GeneratorSpec::validate() const {
    for (const ChannelSpec& ch : channels) {
        if (ch.mode < 0 || ch.mode >= space.n_modes())
            throw ValidationError("GeneratorSpec: channel mode out of range");
        if (ch.rate < 0.0) throw ValidationError("GeneratorSpec: channel rate must be >= 0");
        if (ch.kind == ChannelKind::selective_emission ||
            ch.kind == ChannelKind::selective_absorption) {
            if (ch.ell < 0 || ch.ell + 1 >= space.cutoff(ch.mode))
                throw ValidationError(
                    "GeneratorSpec: selective subspace does not fit the mode cutoff");
        }
    }
    if (include_hamiltonian && omega_bar.size() != space.n_modes())
        throw ValidationError("GeneratorSpec: omega_bar must have one entry per mode");
}

SparseC dissipator(const SparseC& jump, double rate) {
    if (jump.rows() != jump.cols()) throw ValidationError("dissipator: jump must be square");
    if (rate < 0.0) throw ValidationError("dissipator: rate must be >= 0");
    const long dim = jump.rows();
    SparseC jdag = SparseC(jump.adjoint());
    SparseC jdagj = SparseC(jdag * jump);
    SparseC id = sparse_identity(dim);
    SparseC out = left_right_product(jump, jdag);          // J rho J^dag
    out = SparseC(2.0 * out);
    out -= left_right_product(jdagj, id);                  // J^dag J rho
    out -= left_right_product(id, jdagj);                  // rho J^dag J
    return SparseC(0.5 * rate * out);
}

Liouvillian::Liouvillian(GeneratorSpec gen) : gen_(std::move(gen)) {
    gen_.validate();
    const TruncatedSpace& space = gen_.space;
    for (const ChannelSpec& ch : gen_.channels) {
        SparseC jump;
        switch (ch.kind) {
            case ChannelKind::thermal_emission:
            case ChannelKind::cooling:
                jump = ladder_ops(space, ch.mode).first;
                break;
            case ChannelKind::thermal_absorption:
                jump = ladder_ops(space, ch.mode).second;
                break;
            case ChannelKind::selective_emission:
                jump = selective_ops(space, ch.mode, ch.ell).first;
                break;
            case ChannelKind::selective_absorption:
                jump = selective_ops(space, ch.mode, ch.ell).second;
                break;
        }
        jump_.push_back(jump);
        jump_dag_.push_back(SparseC(jump.adjoint()));
        jdagj_.push_back(SparseC(jump_dag_.back() * jump));
        rate_.push_back(ch.rate);
    }
    if (gen_.include_hamiltonian) {
        hamiltonian_ = SparseC(space.dim(), space.dim());
        for (int m = 0; m < space.n_modes(); ++m)
            hamiltonian_ += SparseC(Complex(gen_.omega_bar(m), 0.0) * number_op(space, m));
    }
}

Eigen::MatrixXcd Liouvillian::apply(const Eigen::MatrixXcd& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim())
        throw ValidationError("Liouvillian::apply: dimension mismatch");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim(), dim());
    for (std::size_t k = 0; k < jump_.size(); ++k) {
        if (rate_[k] == 0.0) continue;
        Eigen::MatrixXcd jr = jump_[k] * rho;
        out += rate_[k] * (jr * jump_dag_[k]);
        Eigen::MatrixXcd anticomm = jdagj_[k] * rho;
        anticomm += rho * jdagj_[k];
        out -= 0.5 * rate_[k] * anticomm;
    }
    if (gen_.include_hamiltonian) {
        const Complex i(0.0, 1.0);
        out -= i * (hamiltonian_ * rho - rho * hamiltonian_);
    }
    return out;
}

const SparseC& Liouvillian::matrix() const {
    if (!matrix_built_) {
        SparseC acc(super_dim(), super_dim());
        for (std::size_t k = 0; k < jump_.size(); ++k) {
            if (rate_[k] == 0.0) continue;
            acc += dissipator(jump_[k], rate_[k]);
        }
        if (gen_.include_hamiltonian) {
            SparseC id = sparse_identity(dim());
            const Complex i(0.0, 1.0);
            acc -= SparseC(i * left_right_product(hamiltonian_, id));
            acc += SparseC(i * left_right_product(id, hamiltonian_));
        }
        matrix_ = acc;
        matrix_.makeCompressed();
        matrix_built_ = true;
    }
    return matrix_;
}

double Liouvillian::residual_max(const DensityOperator& rho) const {
    return apply(rho.matrix).cwiseAbs().maxCoeff();
}

double Liouvillian::max_mode_rate() const {
    Eigen::VectorXd per_mode = Eigen::VectorXd::Zero(gen_.space.n_modes());
    for (const ChannelSpec& ch : gen_.channels) per_mode(ch.mode) += ch.rate;
    const double max_rate = per_mode.size() > 0 ? per_mode.maxCoeff() : 0.0;
    return max_rate > 0.0 ? max_rate : 1.0;
}

std::vector<ChannelSpec> thermal_channels(const Eigen::VectorXd& gamma_bar,
                                          const Eigen::VectorXd& nbar_bar) {
    if (gamma_bar.size() != nbar_bar.size())
        throw ValidationError("thermal_channels: length mismatch");
    std::vector<ChannelSpec> channels;
    for (int m = 0; m < gamma_bar.size(); ++m) {
        if (gamma_bar(m) <= 0.0) continue;
        channels.push_back({m, ChannelKind::thermal_emission, 0,
                            gamma_bar(m) * (1.0 + nbar_bar(m))});
        if (nbar_bar(m) > 0.0)
            channels.push_back({m, ChannelKind::thermal_absorption, 0,
                                gamma_bar(m) * nbar_bar(m)});
    }
    return channels;
}

namespace {

// Two-cavity scaffold shared by the Bell and NOON presets. The generator acts
// on the normal modes (+ index 0, - index 1); only the rate structure of the
// natural loss depends on the network, not the (rotating-frame) frequencies.
GeneratorSpec two_mode_base(double gamma, double nbar, std::vector<int> cutoffs) {
    if (cutoffs.size() != 2) throw ValidationError("preset: two-mode presets need 2 cutoffs");
    NetworkSpec net = NetworkSpec::symmetric(2, 1.0, 0.1, gamma, nbar);
    NormalModeBasis basis = normal_modes(net);
    GeneratorSpec gen{TruncatedSpace(std::move(cutoffs)), {}, basis.omega_bar, false};
    gen.channels = thermal_channels(basis.gamma_bar, basis.nbar_bar);
    return gen;
}

}  // namespace

GeneratorSpec bell_generator(double Gamma0, double gamma, double nbar,
                             std::vector<int> cutoffs) {
    GeneratorSpec gen = two_mode_base(gamma, nbar, std::move(cutoffs));
    gen.channels.insert(gen.channels.begin(),
                        {0, ChannelKind::selective_absorption, 0, Gamma0});
    gen.validate();
    return gen;
}

GeneratorSpec bell_full_generator(double Gamma_plus1, double Gamma_plus0,
                                  double Gamma_minus, double gamma, double nbar,
                                  std::vector<int> cutoffs) {
    GeneratorSpec gen = two_mode_base(gamma, nbar, std::move(cutoffs));
    std::vector<ChannelSpec> engineered{
        {0, ChannelKind::selective_absorption, 0, Gamma_plus0},
        {0, ChannelKind::selective_emission, 1, Gamma_plus1},
        {1, ChannelKind::cooling, 0, Gamma_minus},
    };
    gen.channels.insert(gen.channels.begin(), engineered.begin(), engineered.end());
    gen.validate();
    return gen;
}

GeneratorSpec noon_generator(double Gamma_plus0, double Gamma_minus0, double Gamma_plus1,
                             double Gamma_minus1, double gamma, double nbar,
                             std::vector<int> cutoffs) {
    GeneratorSpec gen = two_mode_base(gamma, nbar, std::move(cutoffs));
    std::vector<ChannelSpec> engineered{
        {0, ChannelKind::selective_absorption, 0, Gamma_plus0},
        {1, ChannelKind::selective_absorption, 0, Gamma_minus0},
    };
    if (Gamma_plus1 > 0.0)
        engineered.push_back({0, ChannelKind::selective_emission, 1, Gamma_plus1});
    if (Gamma_minus1 > 0.0)
        engineered.push_back({1, ChannelKind::selective_emission, 1, Gamma_minus1});
    gen.channels.insert(gen.channels.begin(), engineered.begin(), engineered.end());
    gen.validate();
    return gen;
}

GeneratorSpec w_generator(int n, double Gamma10, double Gamma_j, double gamma,
                          double nbar, std::vector<int> cutoffs) {
    if (n < 2) throw ValidationError("w_generator: need N >= 2");
    if (cutoffs.empty()) {
        cutoffs.assign(static_cast<std::size_t>(n), 3);
        cutoffs[0] = 4;  // engineered collective mode holds the excitation
    }
    if (static_cast<int>(cutoffs.size()) != n)
        throw ValidationError("w_generator: cutoffs must have one entry per mode");

    NetworkSpec net = NetworkSpec::symmetric(n, 1.0, 0.1, gamma, nbar);
    NormalModeBasis basis = normal_modes(net);
    GeneratorSpec gen{TruncatedSpace(std::move(cutoffs)), {}, basis.omega_bar, false};
    // Collective mode: engineered absorption plus all the natural loss
    // (gamma_bar = N gamma there, zero on the degenerate modes).
    gen.channels.push_back({0, ChannelKind::selective_absorption, 0, Gamma10});
    auto thermal = thermal_channels(basis.gamma_bar, basis.nbar_bar);
    gen.channels.insert(gen.channels.end(), thermal.begin(), thermal.end());
    for (int j = 1; j < n; ++j)
        gen.channels.push_back({j, ChannelKind::cooling, 0, Gamma_j});
    gen.validate();
    return gen;
}

}  // namespace bosonet
