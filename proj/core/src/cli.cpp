#include "bosonet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bosonet/version.hpp"

namespace bosonet {

namespace {

using nlohmann::json;

std::string fmt_num(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string fmt_short(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", value);
    return buf;
}

const json& require_field(const json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ConfigError("missing required field", key);
    return doc.at(key);
}

double require_number(const json& doc, const std::string& key) {
    const json& value = require_field(doc, key);
    if (!value.is_number()) throw ConfigError("expected a number", key);
    return value.get<double>();
}

double optional_number(const json& doc, const std::string& key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc.at(key).is_number()) throw ConfigError("expected a number", key);
    return doc.at(key).get<double>();
}

int optional_int(const json& doc, const std::string& key, int fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc.at(key).is_number_integer()) throw ConfigError("expected an integer", key);
    return doc.at(key).get<int>();
}

Complex parse_complex(const json& value, const std::string& key) {
    if (value.is_number()) return Complex(value.get<double>(), 0.0);
    if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
        return Complex(value[0].get<double>(), value[1].get<double>());
    throw ConfigError("expected a number or [re, im] pair", key);
}

Eigen::VectorXd parse_vector(const json& value, const std::string& key) {
    if (!value.is_array()) throw ConfigError("expected an array of numbers", key);
    Eigen::VectorXd out(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number()) throw ConfigError("expected an array of numbers", key);
        out(static_cast<Eigen::Index>(i)) = value[i].get<double>();
    }
    return out;
}

void require_rates(const ScenarioConfig& cfg, const std::vector<std::string>& keys) {
    for (const std::string& key : keys)
        if (!cfg.rates.count(key))
            throw ConfigError("scenario '" + to_string(cfg.scenario) + "' needs this rate",
                              "rates." + key);
}

std::vector<int> default_cutoffs(const ScenarioConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::bell:
        case Scenario::bell_full:
        case Scenario::noon:
        case Scenario::noon_full:
            return {4, 4};
        case Scenario::w: {
            std::vector<int> c(static_cast<std::size_t>(cfg.n_modes), 3);
            c[0] = 4;  // engineered collective mode
            return c;
        }
        case Scenario::linear_chain: {
            std::vector<int> c(static_cast<std::size_t>(cfg.n_modes), 3);
            c[static_cast<std::size_t>(cfg.branch - 1)] = 4;
            return c;
        }
        case Scenario::custom:
            return cfg.cutoffs;  // parse guarantees presence
    }
    throw ConfigError("unknown scenario");
}

double rate_of(const ScenarioConfig& cfg, const std::string& key) {
    auto it = cfg.rates.find(key);
    if (it == cfg.rates.end()) throw ConfigError("missing rate", "rates." + key);
    return it->second;
}

struct ScenarioSetup {
    GeneratorSpec generator;
    TargetState target;
    double nbar_initial = 0.0;
};

ScenarioSetup build_scenario(const ScenarioConfig& cfg, const std::vector<int>& cutoffs) {
    ScenarioSetup setup;
    setup.nbar_initial = cfg.nbar;
    switch (cfg.scenario) {
        case Scenario::bell:
            setup.generator = bell_generator(rate_of(cfg, "Gamma0"), cfg.gamma, cfg.nbar, cutoffs);
            setup.target = target_state(setup.generator.space, TargetKind::bell_plus);
            break;
        case Scenario::bell_full:
            setup.generator =
                bell_full_generator(rate_of(cfg, "Gamma_plus1"), rate_of(cfg, "Gamma_plus0"),
                                    rate_of(cfg, "Gamma_minus"), cfg.gamma, cfg.nbar, cutoffs);
            setup.target = target_state(setup.generator.space, TargetKind::bell_plus);
            break;
        case Scenario::noon:
            setup.generator = noon_generator(rate_of(cfg, "Gamma_plus0"),
                                             rate_of(cfg, "Gamma_minus0"), 0.0, 0.0, cfg.gamma,
                                             cfg.nbar, cutoffs);
            setup.target = target_state(setup.generator.space, TargetKind::noon);
            break;
        case Scenario::noon_full:
            setup.generator = noon_generator(
                rate_of(cfg, "Gamma_plus0"), rate_of(cfg, "Gamma_minus0"),
                rate_of(cfg, "Gamma_plus1"), rate_of(cfg, "Gamma_minus1"), cfg.gamma, cfg.nbar,
                cutoffs);
            setup.target = target_state(setup.generator.space, TargetKind::noon);
            break;
        case Scenario::w:
            setup.generator = w_generator(cfg.n_modes, rate_of(cfg, "Gamma10"),
                                          rate_of(cfg, "Gamma_j"), cfg.gamma, cfg.nbar, cutoffs);
            setup.target = target_state(setup.generator.space, TargetKind::w);
            break;
        case Scenario::linear_chain: {
            NetworkSpec net = NetworkSpec::chain(cfg.n_modes, 1.0, 0.1, cfg.gamma, cfg.nbar);
            NormalModeBasis basis = normal_modes(net);
            GeneratorSpec gen{TruncatedSpace(cutoffs), {}, basis.omega_bar, false};
            gen.channels.push_back(
                {cfg.branch - 1, ChannelKind::selective_absorption, 0, rate_of(cfg, "Gamma0")});
            auto thermal = thermal_channels(basis.gamma_bar, basis.nbar_bar);
            gen.channels.insert(gen.channels.end(), thermal.begin(), thermal.end());
            setup.generator = std::move(gen);
            setup.target = target_state(setup.generator.space, TargetKind::linear_chain,
                                        cfg.branch);
            break;
        }
        case Scenario::custom: {
            const NetworkSpec& net = *cfg.network;
            if (net.nbar.size() > 0 &&
                net.nbar.maxCoeff() - net.nbar.minCoeff() > 1e-12)
                throw UnsupportedConfigError(
                    "custom scenario: unequal thermal occupations have no defined "
                    "normal-mode initial state");
            NormalModeBasis basis = normal_modes(net);
            GeneratorSpec gen{TruncatedSpace(cutoffs), {}, basis.omega_bar, false};
            gen.channels = cfg.engineered;
            auto thermal = thermal_channels(basis.gamma_bar, basis.nbar_bar);
            gen.channels.insert(gen.channels.end(), thermal.begin(), thermal.end());
            setup.generator = std::move(gen);
            setup.target =
                target_state(setup.generator.space, *cfg.target, cfg.branch);
            setup.nbar_initial = net.nbar.size() > 0 ? net.nbar(0) : 0.0;
            break;
        }
    }
    setup.generator.include_hamiltonian = cfg.include_hamiltonian;
    return setup;
}

}  // namespace

Scenario scenario_from_string(const std::string& name) {
    if (name == "bell") return Scenario::bell;
    if (name == "bell_full") return Scenario::bell_full;
    if (name == "noon") return Scenario::noon;
    if (name == "noon_full") return Scenario::noon_full;
    if (name == "w") return Scenario::w;
    if (name == "linear_chain") return Scenario::linear_chain;
    if (name == "custom") return Scenario::custom;
    throw ConfigError("unknown scenario '" + name + "'", "scenario");
}

std::string to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::bell: return "bell";
        case Scenario::bell_full: return "bell_full";
        case Scenario::noon: return "noon";
        case Scenario::noon_full: return "noon_full";
        case Scenario::w: return "w";
        case Scenario::linear_chain: return "linear_chain";
        case Scenario::custom: return "custom";
    }
    return "?";
}

ScenarioConfig parse_scenario_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> known{
        "scenario", "N", "branch", "rates", "gamma", "nbar", "cutoffs",
        "t_final", "dt", "max_output_points", "include_hamiltonian", "out",
        "network", "channels", "target"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("unknown field", it.key());

    ScenarioConfig cfg;
    if (!require_field(doc, "scenario").is_string())
        throw ConfigError("expected a string", "scenario");
    cfg.scenario = scenario_from_string(doc.at("scenario").get<std::string>());
    cfg.n_modes = optional_int(doc, "N", 2);
    cfg.branch = optional_int(doc, "branch", 1);
    cfg.gamma = optional_number(doc, "gamma", 1.0);
    cfg.nbar = optional_number(doc, "nbar", 0.05);
    cfg.t_final = optional_number(doc, "t_final", 0.0);
    cfg.dt = optional_number(doc, "dt", 0.0);
    cfg.max_output_points = optional_int(doc, "max_output_points", 200);
    if (doc.contains("include_hamiltonian")) {
        if (!doc.at("include_hamiltonian").is_boolean())
            throw ConfigError("expected a boolean", "include_hamiltonian");
        cfg.include_hamiltonian = doc.at("include_hamiltonian").get<bool>();
    }
    if (doc.contains("out")) {
        if (!doc.at("out").is_string()) throw ConfigError("expected a string", "out");
        cfg.out = doc.at("out").get<std::string>();
    }
    if (doc.contains("rates")) {
        if (!doc.at("rates").is_object()) throw ConfigError("expected an object", "rates");
        for (auto it = doc.at("rates").begin(); it != doc.at("rates").end(); ++it) {
            if (!it.value().is_number())
                throw ConfigError("expected a number", "rates." + it.key());
            cfg.rates[it.key()] = it.value().get<double>();
        }
    }
    if (doc.contains("cutoffs")) {
        if (!doc.at("cutoffs").is_array()) throw ConfigError("expected an array", "cutoffs");
        for (const auto& value : doc.at("cutoffs")) {
            if (!value.is_number_integer()) throw ConfigError("expected integers", "cutoffs");
            cfg.cutoffs.push_back(value.get<int>());
        }
    }

    if (cfg.gamma < 0.0) throw ConfigError("gamma must be >= 0", "gamma");
    if (cfg.nbar < 0.0) throw ConfigError("nbar must be >= 0", "nbar");
    if (cfg.t_final < 0.0) throw ConfigError("t_final must be >= 0", "t_final");
    if (cfg.dt < 0.0) throw ConfigError("dt must be >= 0", "dt");
    if (cfg.max_output_points < 2)
        throw ConfigError("max_output_points must be >= 2", "max_output_points");
    for (const auto& [key, value] : cfg.rates)
        if (value < 0.0) throw ConfigError("rates must be >= 0", "rates." + key);

    switch (cfg.scenario) {
        case Scenario::bell: require_rates(cfg, {"Gamma0"}); break;
        case Scenario::bell_full:
            require_rates(cfg, {"Gamma_plus1", "Gamma_plus0", "Gamma_minus"});
            break;
        case Scenario::noon: require_rates(cfg, {"Gamma_plus0", "Gamma_minus0"}); break;
        case Scenario::noon_full:
            require_rates(cfg, {"Gamma_plus0", "Gamma_minus0", "Gamma_plus1", "Gamma_minus1"});
            break;
        case Scenario::w:
            require_rates(cfg, {"Gamma10", "Gamma_j"});
            if (cfg.n_modes < 2) throw ConfigError("w scenario needs N >= 2", "N");
            break;
        case Scenario::linear_chain:
            require_rates(cfg, {"Gamma0"});
            if (cfg.n_modes < 2) throw ConfigError("linear_chain needs N >= 2", "N");
            if (cfg.branch < 1 || cfg.branch > cfg.n_modes)
                throw ConfigError("branch must lie in 1..N", "branch");
            break;
        case Scenario::custom: {
            const json& net = require_field(doc, "network");
            NetworkSpec spec;
            spec.omega = parse_vector(require_field(net, "omega"), "network.omega");
            spec.gamma = parse_vector(require_field(net, "gamma"), "network.gamma");
            spec.nbar = parse_vector(require_field(net, "nbar"), "network.nbar");
            const json& lam = require_field(net, "lambda");
            if (!lam.is_array()) throw ConfigError("expected a matrix", "network.lambda");
            const auto n = spec.omega.size();
            spec.lambda.resize(n, n);
            if (static_cast<Eigen::Index>(lam.size()) != n)
                throw ConfigError("lambda must be N x N", "network.lambda");
            for (Eigen::Index i = 0; i < n; ++i) {
                Eigen::VectorXd row = parse_vector(lam[static_cast<std::size_t>(i)],
                                                   "network.lambda");
                if (row.size() != n) throw ConfigError("lambda must be N x N", "network.lambda");
                spec.lambda.row(i) = row.transpose();
            }
            try {
                spec.validate();
            } catch (const std::invalid_argument& err) {
                throw ConfigError(err.what(), "network");
            }
            cfg.network = std::move(spec);
            cfg.n_modes = static_cast<int>(cfg.network->n_modes());

            const json& channels = require_field(doc, "channels");
            if (!channels.is_array()) throw ConfigError("expected an array", "channels");
            for (const auto& entry : channels) {
                ChannelSpec ch;
                ch.mode = static_cast<int>(require_number(entry, "mode"));
                try {
                    ch.kind = channel_kind_from_string(
                        require_field(entry, "kind").get<std::string>());
                } catch (const std::invalid_argument& err) {
                    throw ConfigError(err.what(), "channels.kind");
                }
                ch.ell = optional_int(entry, "ell", 0);
                ch.rate = require_number(entry, "rate");
                if (ch.rate < 0.0) throw ConfigError("rates must be >= 0", "channels.rate");
                cfg.engineered.push_back(ch);
            }

            const json& target = require_field(doc, "target");
            try {
                cfg.target = target_kind_from_string(
                    require_field(target, "kind").get<std::string>());
            } catch (const std::invalid_argument& err) {
                throw ConfigError(err.what(), "target.kind");
            }
            cfg.branch = optional_int(target, "branch", cfg.branch);
            if (cfg.cutoffs.empty())
                throw ConfigError("custom scenario requires explicit cutoffs", "cutoffs");
            break;
        }
    }
    if (!cfg.cutoffs.empty() && static_cast<int>(cfg.cutoffs.size()) !=
                                    (cfg.scenario == Scenario::w ||
                                             cfg.scenario == Scenario::linear_chain ||
                                             cfg.scenario == Scenario::custom
                                         ? cfg.n_modes
                                         : 2))
        throw ConfigError("cutoffs must have one entry per mode", "cutoffs");
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("JSON parse error: ") + err.what());
    }
    return parse_scenario_config(doc);
}

nlohmann::json ScenarioConfig::to_json() const {
    json doc;
    doc["scenario"] = bosonet::to_string(scenario);
    doc["gamma"] = gamma;
    doc["nbar"] = nbar;
    doc["t_final"] = t_final;
    doc["dt"] = dt;
    doc["max_output_points"] = max_output_points;
    doc["include_hamiltonian"] = include_hamiltonian;
    if (!rates.empty()) doc["rates"] = rates;
    if (!cutoffs.empty()) doc["cutoffs"] = cutoffs;
    if (scenario == Scenario::w || scenario == Scenario::linear_chain) doc["N"] = n_modes;
    if (scenario == Scenario::linear_chain) doc["branch"] = branch;
    if (scenario == Scenario::custom) {
        json net;
        net["omega"] = std::vector<double>(network->omega.data(),
                                           network->omega.data() + network->omega.size());
        net["gamma"] = std::vector<double>(network->gamma.data(),
                                           network->gamma.data() + network->gamma.size());
        net["nbar"] = std::vector<double>(network->nbar.data(),
                                          network->nbar.data() + network->nbar.size());
        std::vector<std::vector<double>> lam;
        for (Eigen::Index i = 0; i < network->lambda.rows(); ++i) {
            std::vector<double> row(static_cast<std::size_t>(network->lambda.cols()));
            for (Eigen::Index j = 0; j < network->lambda.cols(); ++j)
                row[static_cast<std::size_t>(j)] = network->lambda(i, j);
            lam.push_back(std::move(row));
        }
        net["lambda"] = lam;
        doc["network"] = net;
        json channels = json::array();
        for (const ChannelSpec& ch : engineered) {
            json entry;
            entry["mode"] = ch.mode;
            entry["kind"] = bosonet::to_string(ch.kind);
            entry["ell"] = ch.ell;
            entry["rate"] = ch.rate;
            channels.push_back(entry);
        }
        doc["channels"] = channels;
        doc["target"] = {{"kind", bosonet::to_string(*target)}, {"branch", branch}};
    }
    return doc;
}

void set_parameter(ScenarioConfig& cfg, const std::string& name, double value) {
    if (name == "gamma") {
        cfg.gamma = value;
    } else if (name == "nbar") {
        cfg.nbar = value;
    } else if (name == "t_final") {
        cfg.t_final = value;
    } else if (name == "dt") {
        cfg.dt = value;
    } else if (name == "N") {
        cfg.n_modes = static_cast<int>(value);
    } else if (name == "branch") {
        cfg.branch = static_cast<int>(value);
    } else {
        std::string key = name;
        if (key.rfind("rates.", 0) == 0) key = key.substr(6);
        auto it = cfg.rates.find(key);
        if (it == cfg.rates.end())
            throw ConfigError("sweep parameter does not exist in the template", name);
        it->second = value;
    }
}

std::string RunOutput::to_csv() const {
    std::ostringstream out;
    for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (Eigen::Index r = 0; r < table.rows(); ++r)
        for (Eigen::Index c = 0; c < table.cols(); ++c)
            out << fmt_num(table(r, c)) << (c + 1 < table.cols() ? "," : "\n");
    return out.str();
}

RunOutput run_scenario(const ScenarioConfig& cfg) {
    ScenarioConfig effective = cfg;
    if (effective.cutoffs.empty()) effective.cutoffs = default_cutoffs(effective);

    ScenarioSetup setup = build_scenario(effective, effective.cutoffs);
    Liouvillian liou(setup.generator);
    DensityOperator rho0 = thermal_state(liou.space(), setup.nbar_initial);

    EvolveOptions opts;
    opts.t_final = effective.t_final > 0.0 ? effective.t_final : 50.0;
    opts.steady_stop_tol = effective.t_final > 0.0 ? 0.0 : 1e-8;
    opts.dt = effective.dt > 0.0 ? effective.dt : 1e-2 / liou.max_mode_rate();
    opts.max_outputs = effective.max_output_points;
    opts.fidelity_target = setup.target.normal;
    Trajectory traj = evolve(liou, rho0, opts);

    const int n = liou.space().n_modes();
    RunOutput output;
    output.columns = {"t_gamma", "fidelity", "purity"};
    for (int m = 1; m <= n; ++m) output.columns.push_back("n_mode_" + std::to_string(m));
    const auto rows = static_cast<Eigen::Index>(traj.times.size());
    output.table.resize(rows, 3 + n);
    for (Eigen::Index i = 0; i < rows; ++i) {
        output.table(i, 0) = traj.times[static_cast<std::size_t>(i)];
        output.table(i, 1) = traj.fidelity[static_cast<std::size_t>(i)];
        output.table(i, 2) = traj.purity[static_cast<std::size_t>(i)];
        output.table.row(i).segment(3, n) = traj.occupations.row(i);
    }

    output.metadata.emplace_back("version", kVersion);
    output.metadata.emplace_back("scenario", to_string(effective.scenario));
    output.metadata.emplace_back("config", effective.to_json().dump());
    output.metadata.emplace_back("dt", fmt_num(traj.dt_used));
    output.metadata.emplace_back("horizon", fmt_num(traj.horizon));
    output.metadata.emplace_back("reached_steady", traj.reached_steady ? "true" : "false");
    output.metadata.emplace_back("steady_residual",
                                 fmt_num(liou.residual_max(traj.final_state)));
    return output;
}

void write_run_output(const RunOutput& output, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << output.to_csv();
    if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

namespace {

std::string sweep_output_path(const std::string& base, const std::string& param,
                              double value) {
    std::string key = param;
    const auto dot = key.find_last_of('.');
    if (dot != std::string::npos) key = key.substr(dot + 1);
    const std::string suffix = "_" + key + "=" + fmt_short(value);

    const auto slash = base.find_last_of('/');
    const auto ext = base.find_last_of('.');
    if (ext == std::string::npos || (slash != std::string::npos && ext < slash))
        return base + suffix;
    return base.substr(0, ext) + suffix + base.substr(ext);
}

}  // namespace

std::vector<SweepEntry> sweep(const ScenarioConfig& base, const std::string& param,
                              const std::vector<double>& values,
                              const std::string& out_path) {
    std::vector<SweepEntry> entries;
    for (double value : values) {
        SweepEntry entry;
        entry.value = value;
        entry.path = sweep_output_path(out_path, param, value);
        try {
            ScenarioConfig cfg = base;
            set_parameter(cfg, param, value);
            RunOutput output = run_scenario(cfg);
            write_run_output(output, entry.path);
            entry.ok = true;
        } catch (const std::exception& err) {
            entry.ok = false;
            entry.error = err.what();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

DesignConfig parse_design_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("design config must be a JSON object");
    static const std::vector<std::string> known{
        "Omega0", "Omega1", "Omega2", "Delta", "Delta1", "Delta2", "lambda",
        "r", "tau", "gamma", "ell_max", "ell_target", "threshold"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("unknown field", it.key());

    DesignConfig cfg;
    cfg.drive.Omega0 = parse_complex(require_field(doc, "Omega0"), "Omega0");
    if (doc.contains("Omega1")) cfg.drive.Omega1 = parse_complex(doc.at("Omega1"), "Omega1");
    cfg.drive.Omega2 = parse_complex(require_field(doc, "Omega2"), "Omega2");
    cfg.drive.Delta = require_number(doc, "Delta");
    cfg.drive.Delta1 = require_number(doc, "Delta1");
    cfg.drive.Delta2 = require_number(doc, "Delta2");
    cfg.drive.lambda = optional_number(doc, "lambda", 0.0);
    cfg.drive.r = require_number(doc, "r");
    cfg.drive.tau = require_number(doc, "tau");
    cfg.gamma_ref = optional_number(doc, "gamma", 1.0);
    cfg.ell_max = optional_int(doc, "ell_max", 2);
    cfg.ell_target = optional_int(doc, "ell_target", 0);
    cfg.threshold = optional_number(doc, "threshold", 10.0);
    if (cfg.gamma_ref <= 0.0) throw ConfigError("gamma must be > 0", "gamma");
    if (cfg.ell_max < 0) throw ConfigError("ell_max must be >= 0", "ell_max");
    if (cfg.ell_target < 0 || cfg.ell_target > cfg.ell_max)
        throw ConfigError("ell_target must lie in 0..ell_max", "ell_target");
    return cfg;
}

DesignConfig load_design_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("JSON parse error: ") + err.what());
    }
    return parse_design_config(doc);
}

DesignReport design_report(const DesignConfig& cfg) {
    DesignReport report;
    report.gamma_ref = cfg.gamma_ref;

    const DriveParams& p = cfg.drive;
    report.zeta_single_cavity =
        std::abs(p.Omega0) * std::abs(p.Omega2) *
        std::abs(1.0 / p.Delta + 1.0 / p.Delta2) / 2.0;

    for (int ell = 0; ell <= cfg.ell_max; ++ell) {
        const SelectivityTuning tuning = selectivity_tuning(p, ell);
        DriveParams tuned = apply_tuning(p, ell);
        const EffectiveCouplings c = effective_couplings(tuned);
        DesignRow row;
        row.ell = ell;
        row.omega1_required = tuning.Omega1_mag;
        row.delta_required = tuning.delta;
        row.zeta_ell = c.zeta_n(ell);
        row.zeta_ell_tau = row.zeta_ell * p.tau;
        row.rate = engineered_rate(tuned, ell);
        row.rate_over_ref = row.rate / cfg.gamma_ref;
        report.rows.push_back(row);
    }

    DriveParams tuned_target = apply_tuning(p, cfg.ell_target);
    report.couplings = effective_couplings(tuned_target);
    // Regime checks at the operating subspace: occupations explored by the
    // target channel stay at n = ell_target.
    report.regime = validate_regime(tuned_target, cfg.ell_target, cfg.threshold);
    return report;
}

std::string DesignReport::to_text() const {
    std::ostringstream out;
    out << "bosonet design report (version " << kVersion << ")\n";
    out << "effective couplings at the tuned target subspace:\n";
    out << "  xi        = " << fmt_num(couplings.xi) << " rad/s\n";
    out << "  |zeta|    = " << fmt_num(std::abs(couplings.zeta)) << " rad/s"
        << "  (single-cavity Raman value " << fmt_num(zeta_single_cavity) << ")\n";
    out << "  varpi_g   = " << fmt_num(couplings.varpi_g) << " rad/s\n";
    out << "  varpi_e   = " << fmt_num(couplings.varpi_e) << " rad/s\n";
    out << "achievable engineered rates:\n";
    out << "  ell  |Omega1|_req    delta_req      |zeta_ell|     zeta_ell*tau   "
           "Gamma (1/s)    Gamma/gamma\n";
    for (const DesignRow& row : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "  %-4d %-14.6g %-14.6g %-14.6g %-14.6g %-14.6g %-14.6g\n", row.ell,
                      row.omega1_required, row.delta_required, row.zeta_ell,
                      row.zeta_ell_tau, row.rate, row.rate_over_ref);
        out << buf;
    }
    out << "regime checks (threshold " << fmt_short(regime.threshold) << "):\n";
    for (const RegimeCheck& check : regime.checks) {
        char buf[200];
        std::snprintf(buf, sizeof(buf), "  [%s] %-55s lhs=%-12.6g rhs=%-12.6g ratio=%-10.6g\n",
                      check.pass ? "PASS" : "FAIL", check.name.c_str(), check.lhs, check.rhs,
                      check.ratio);
        out << buf;
    }
    return out.str();
}

nlohmann::json DesignReport::to_json() const {
    json doc;
    doc["version"] = kVersion;
    doc["gamma_ref"] = gamma_ref;
    doc["couplings"] = {{"xi", couplings.xi},
                        {"zeta_re", couplings.zeta.real()},
                        {"zeta_im", couplings.zeta.imag()},
                        {"zeta_abs", std::abs(couplings.zeta)},
                        {"zeta_single_cavity", zeta_single_cavity},
                        {"varpi_g", couplings.varpi_g},
                        {"varpi_e", couplings.varpi_e},
                        {"delta", couplings.delta}};
    json rows_json = json::array();
    for (const DesignRow& row : rows) {
        rows_json.push_back({{"ell", row.ell},
                             {"Omega1_required", row.omega1_required},
                             {"delta_required", row.delta_required},
                             {"zeta_ell", row.zeta_ell},
                             {"zeta_ell_tau", row.zeta_ell_tau},
                             {"Gamma", row.rate},
                             {"Gamma_over_gamma", row.rate_over_ref}});
    }
    doc["rates"] = rows_json;
    json checks = json::array();
    for (const RegimeCheck& check : regime.checks) {
        checks.push_back({{"name", check.name},
                          {"category", check.category},
                          {"lhs", check.lhs},
                          {"rhs", check.rhs},
                          {"ratio", check.ratio},
                          {"pass", check.pass}});
    }
    doc["regime"] = {{"threshold", regime.threshold}, {"checks", checks}};
    return doc;
}

}  // namespace bosonet
