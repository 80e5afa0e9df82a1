// Scenario presets, JSON config ingestion, CSV emission, parameter sweeps,
// and the reservoir-engineering design report. The command line tool in
// tools/ is a thin wrapper over these entry points so they stay testable.

#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bosonet/dynamics.hpp"
#include "bosonet/liouvillian.hpp"
#include "bosonet/network.hpp"
#include "bosonet/reservoir.hpp"
#include "bosonet/states.hpp"

namespace bosonet {

enum class Scenario { bell, bell_full, noon, noon_full, w, linear_chain, custom };

Scenario scenario_from_string(const std::string& name);
std::string to_string(Scenario scenario);

struct ScenarioConfig {
    Scenario scenario = Scenario::bell;
    int n_modes = 2;                     // w / linear_chain
    int branch = 1;                      // linear_chain target branch
    std::map<std::string, double> rates; // engineered rates, units of gamma
    double gamma = 1.0;
    double nbar = 0.05;
    std::vector<int> cutoffs;            // empty = scenario default
    double t_final = 0.0;                // 0 = run until steady (1e-8) or gamma t = 50
    double dt = 0.0;                     // 0 = 1e-2 / (largest per-mode total rate)
    int max_output_points = 200;
    bool include_hamiltonian = false;
    std::string out;

    // custom scenario only
    std::optional<NetworkSpec> network;
    std::vector<ChannelSpec> engineered; // normal-mode channels
    std::optional<TargetKind> target;

    nlohmann::json to_json() const;  // effective config, echoed into outputs
};

ScenarioConfig parse_scenario_config(const nlohmann::json& doc);
ScenarioConfig load_scenario_config(const std::string& path);

// Overridable sweep parameters: gamma, nbar, t_final, dt, N, branch, and
// rates.<key> (or a bare rate key present in the template).
void set_parameter(ScenarioConfig& cfg, const std::string& name, double value);

struct RunOutput {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;  // t_gamma, fidelity, purity, n_mode_1..N
    Eigen::MatrixXd table;

    std::string to_csv() const;
};

RunOutput run_scenario(const ScenarioConfig& cfg);
void write_run_output(const RunOutput& output, const std::string& path);

struct SweepEntry {
    double value = 0.0;
    std::string path;
    bool ok = false;
    std::string error;
};

// One independent run per value; failures are recorded and do not stop the
// remaining runs. Output paths get a _<param>=<value> suffix.
std::vector<SweepEntry> sweep(const ScenarioConfig& base, const std::string& param,
                              const std::vector<double>& values,
                              const std::string& out_path);

struct DesignConfig {
    DriveParams drive;
    double gamma_ref = 1.0;  // natural rate used to express Gamma/gamma
    int ell_max = 2;         // table rows 0..ell_max
    int ell_target = 0;      // subspace the regime checks are evaluated at
    double threshold = 10.0;
};

DesignConfig parse_design_config(const nlohmann::json& doc);
DesignConfig load_design_config(const std::string& path);

struct DesignRow {
    int ell = 0;
    double omega1_required = 0.0;
    double delta_required = 0.0;
    double zeta_ell = 0.0;
    double zeta_ell_tau = 0.0;
    double rate = 0.0;           // 1/s
    double rate_over_ref = 0.0;  // units of gamma_ref
};

struct DesignReport {
    EffectiveCouplings couplings;     // evaluated with tuning at ell_target
    double zeta_single_cavity = 0.0;  // |Omega0 Omega2 (1/Delta + 1/Delta2) / 2|
    std::vector<DesignRow> rows;
    RegimeReport regime;
    double gamma_ref = 1.0;

    std::string to_text() const;
    nlohmann::json to_json() const;
};

DesignReport design_report(const DesignConfig& cfg);

}  // namespace bosonet
