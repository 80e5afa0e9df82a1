// bosonet command line tool.
//
// Verbs:
//   run             evolve a scenario and write the observable table as CSV
//   sweep           repeat a scenario over a list of parameter values
//   design          reservoir-engineering report from physical drive parameters
//   validate-config parse and validate a config without running anything
//
// Exit codes: 0 success, 1 domain error (unsupported configuration,
// integration failure), 2 config error (bad file, bad fields).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bosonet/cli.hpp"
#include "bosonet/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitConfig = 2;

int run_verb(const std::string& config_path, const std::string& out_override) {
    bosonet::ScenarioConfig cfg;
    try {
        cfg = bosonet::load_scenario_config(config_path);
    } catch (const std::exception& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    }
    if (!out_override.empty()) cfg.out = out_override;
    if (cfg.out.empty()) {
        std::cerr << "config error: no output path (set \"out\" or pass --out)\n";
        return kExitConfig;
    }
    try {
        bosonet::RunOutput output = bosonet::run_scenario(cfg);
        bosonet::write_run_output(output, cfg.out);
        std::cout << "wrote " << cfg.out << " (" << output.table.rows() << " rows)\n";
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}

int sweep_verb(const std::string& config_path, const std::string& out_override,
               const std::string& param, const std::vector<double>& values) {
    bosonet::ScenarioConfig cfg;
    try {
        cfg = bosonet::load_scenario_config(config_path);
    } catch (const std::exception& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    }
    if (!out_override.empty()) cfg.out = out_override;
    if (cfg.out.empty()) {
        std::cerr << "config error: no output path (set \"out\" or pass --out)\n";
        return kExitConfig;
    }
    bool any_failed = false;
    const auto entries = bosonet::sweep(cfg, param, values, cfg.out);
    for (const auto& entry : entries) {
        if (entry.ok) {
            std::cout << param << "=" << entry.value << " -> " << entry.path << "\n";
        } else {
            any_failed = true;
            std::cerr << param << "=" << entry.value << " failed: " << entry.error << "\n";
        }
    }
    return any_failed ? kExitDomain : kExitOk;
}

int design_verb(const std::string& config_path, const std::string& out_path, bool as_json) {
    bosonet::DesignConfig cfg;
    try {
        cfg = bosonet::load_design_config(config_path);
    } catch (const std::exception& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    }
    try {
        const bosonet::DesignReport report = bosonet::design_report(cfg);
        const std::string text = as_json ? report.to_json().dump(2) + "\n" : report.to_text();
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot open '" << out_path << "'\n";
                return kExitDomain;
            }
            out << text;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}

int validate_verb(const std::string& config_path, bool design) {
    try {
        if (design) {
            bosonet::load_design_config(config_path);
        } else {
            bosonet::load_scenario_config(config_path);
        }
    } catch (const std::exception& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    }
    std::cout << "config ok\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dissipative preparation of steady entangled states in bosonic networks"};
    app.set_version_flag("--version", std::string(bosonet::kVersion));
    app.require_subcommand(1);

    std::string config_path, out_path, param;
    std::vector<double> values;
    bool as_json = false;
    bool design_config = false;

    CLI::App* run = app.add_subcommand("run", "run one scenario and write CSV output");
    run->add_option("--config", config_path, "scenario config (JSON)")->required();
    run->add_option("--out", out_path, "output CSV path (overrides config)");

    CLI::App* sweep = app.add_subcommand("sweep", "run a scenario over parameter values");
    sweep->add_option("--config", config_path, "scenario config (JSON)")->required();
    sweep->add_option("--out", out_path, "output CSV path template");
    sweep->add_option("--param", param, "parameter to vary (e.g. rates.Gamma0)")->required();
    sweep->add_option("--values", values, "values to sweep over")->expected(0, -1);

    CLI::App* design = app.add_subcommand("design", "reservoir-engineering design report");
    design->add_option("--config", config_path, "drive parameter config (JSON)")->required();
    design->add_option("--out", out_path, "write the report here instead of stdout");
    design->add_flag("--json", as_json, "emit JSON instead of text");

    CLI::App* validate = app.add_subcommand("validate-config", "check a config file");
    validate->add_option("--config", config_path, "config file (JSON)")->required();
    validate->add_flag("--design", design_config, "validate as a design config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed()) return run_verb(config_path, out_path);
    if (sweep->parsed()) return sweep_verb(config_path, out_path, param, values);
    if (design->parsed()) return design_verb(config_path, out_path, as_json);
    if (validate->parsed()) return validate_verb(config_path, design_config);
    return kExitConfig;
}
