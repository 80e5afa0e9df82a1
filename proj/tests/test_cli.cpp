#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "bosonet/cli.hpp"

using namespace bosonet;
using nlohmann::json;

namespace {

json bell_doc() {
    return json{{"scenario", "bell"},
                {"rates", {{"Gamma0", 50.0}}},
                {"t_final", 2.0},
                {"dt", 5e-4}};
}

}  // namespace

TEST_CASE("scenario config parsing") {
    SUBCASE("defaults") {
        ScenarioConfig cfg = parse_scenario_config(bell_doc());
        CHECK(cfg.scenario == Scenario::bell);
        CHECK(cfg.gamma == doctest::Approx(1.0));
        CHECK(cfg.nbar == doctest::Approx(0.05));
        CHECK(cfg.rates.at("Gamma0") == doctest::Approx(50.0));
    }
    SUBCASE("missing scenario") {
        CHECK_THROWS_WITH_AS(parse_scenario_config(json{{"rates", {{"Gamma0", 1.0}}}}),
                             doctest::Contains("scenario"), ConfigError);
    }
    SUBCASE("missing required rate names the field") {
        json doc = bell_doc();
        doc["rates"].erase("Gamma0");
        CHECK_THROWS_WITH_AS(parse_scenario_config(doc), doctest::Contains("rates.Gamma0"),
                             ConfigError);
    }
    SUBCASE("unknown scenario") {
        json doc = bell_doc();
        doc["scenario"] = "ghz";
        CHECK_THROWS_AS(parse_scenario_config(doc), ConfigError);
    }
    SUBCASE("unknown top-level keys are rejected") {
        json doc = bell_doc();
        doc["gama"] = 2.0;
        CHECK_THROWS_WITH_AS(parse_scenario_config(doc), doctest::Contains("gama"),
                             ConfigError);
    }
    SUBCASE("wrong cutoff count") {
        json doc = bell_doc();
        doc["cutoffs"] = {4, 4, 4};
        CHECK_THROWS_WITH_AS(parse_scenario_config(doc), doctest::Contains("cutoffs"),
                             ConfigError);
    }
    SUBCASE("negative rates are rejected") {
        json doc = bell_doc();
        doc["rates"]["Gamma0"] = -1.0;
        CHECK_THROWS_AS(parse_scenario_config(doc), ConfigError);
    }
    SUBCASE("w scenario needs N") {
        json doc{{"scenario", "w"}, {"rates", {{"Gamma10", 50.0}, {"Gamma_j", 50.0}}},
                 {"N", 1}};
        CHECK_THROWS_WITH_AS(parse_scenario_config(doc), doctest::Contains("N"), ConfigError);
    }
    SUBCASE("custom scenario round-trips through the echo") {
        json doc{{"scenario", "custom"},
                 {"cutoffs", {4, 4}},
                 {"network",
                  {{"omega", {1.0, 1.0}},
                   {"lambda", {{0.0, 0.1}, {0.1, 0.0}}},
                   {"gamma", {1.0, 1.0}},
                   {"nbar", {0.05, 0.05}}}},
                 {"channels",
                  {{{"mode", 0}, {"kind", "selective_absorption"}, {"ell", 0}, {"rate", 50.0}}}},
                 {"target", {{"kind", "bell_plus"}}}};
        ScenarioConfig cfg = parse_scenario_config(doc);
        CHECK(cfg.network.has_value());
        CHECK(cfg.engineered.size() == 1);
        CHECK(*cfg.target == TargetKind::bell_plus);
        // Echo must itself parse back.
        ScenarioConfig again = parse_scenario_config(cfg.to_json());
        CHECK(again.engineered.size() == 1);
    }
    SUBCASE("asymmetric custom network is a config error") {
        json doc{{"scenario", "custom"},
                 {"cutoffs", {4, 4}},
                 {"network",
                  {{"omega", {1.0, 1.0}},
                   {"lambda", {{0.0, 0.1}, {0.2, 0.0}}},
                   {"gamma", {1.0, 1.0}},
                   {"nbar", {0.05, 0.05}}}},
                 {"channels", json::array()},
                 {"target", {{"kind", "bell_plus"}}}};
        CHECK_THROWS_WITH_AS(parse_scenario_config(doc), doctest::Contains("network"),
                             ConfigError);
    }
}

TEST_CASE("running scenarios") {
    SUBCASE("bell run produces the pinned column layout") {
        RunOutput output = run_scenario(parse_scenario_config(bell_doc()));
        REQUIRE(output.columns.size() == 5);
        CHECK(output.columns[0] == "t_gamma");
        CHECK(output.columns[1] == "fidelity");
        CHECK(output.columns[2] == "purity");
        CHECK(output.columns[3] == "n_mode_1");
        CHECK(output.columns[4] == "n_mode_2");
        CHECK(output.table.rows() > 2);
        for (Eigen::Index i = 1; i < output.table.rows(); ++i)
            CHECK(output.table(i, 0) > output.table(i - 1, 0));
        bool has_config = false;
        for (const auto& [key, value] : output.metadata) {
            if (key == "config") {
                has_config = true;
                CHECK_NOTHROW(parse_scenario_config(json::parse(value)));
            }
        }
        CHECK(has_config);
    }
    SUBCASE("byte-identical output for identical config") {
        ScenarioConfig cfg = parse_scenario_config(bell_doc());
        CHECK(run_scenario(cfg).to_csv() == run_scenario(cfg).to_csv());
    }
    SUBCASE("custom network reproduces the bell preset") {
        json doc{{"scenario", "custom"},
                 {"cutoffs", {4, 4}},
                 {"t_final", 1.0},
                 {"dt", 5e-4},
                 {"network",
                  {{"omega", {1.0, 1.0}},
                   {"lambda", {{0.0, 0.1}, {0.1, 0.0}}},
                   {"gamma", {1.0, 1.0}},
                   {"nbar", {0.05, 0.05}}}},
                 {"channels",
                  {{{"mode", 0}, {"kind", "selective_absorption"}, {"ell", 0}, {"rate", 50.0}}}},
                 {"target", {{"kind", "bell_plus"}}}};
        json preset = bell_doc();
        preset["t_final"] = 1.0;
        RunOutput via_custom = run_scenario(parse_scenario_config(doc));
        RunOutput via_preset = run_scenario(parse_scenario_config(preset));
        REQUIRE(via_custom.table.rows() == via_preset.table.rows());
        CHECK((via_custom.table - via_preset.table).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("unequal custom occupations are unsupported") {
        json doc{{"scenario", "custom"},
                 {"cutoffs", {4, 4}},
                 {"network",
                  {{"omega", {1.0, 1.0}},
                   {"lambda", {{0.0, 0.1}, {0.1, 0.0}}},
                   {"gamma", {1.0, 1.0}},
                   {"nbar", {0.05, 0.1}}}},
                 {"channels", json::array()},
                 {"target", {{"kind", "bell_plus"}}}};
        CHECK_THROWS_AS(run_scenario(parse_scenario_config(doc)), UnsupportedConfigError);
    }
}

TEST_CASE("parameter sweeps") {
    SUBCASE("one output per value with value-tagged names") {
        ScenarioConfig cfg = parse_scenario_config(bell_doc());
        cfg.t_final = 0.5;
        const std::string out = "sweep_test_bell.csv";
        auto entries = sweep(cfg, "rates.Gamma0", {10.0, 25.0}, out);
        REQUIRE(entries.size() == 2);
        CHECK(entries[0].path == "sweep_test_bell_Gamma0=10.csv");
        CHECK(entries[1].path == "sweep_test_bell_Gamma0=25.csv");
        for (const auto& entry : entries) {
            CHECK(entry.ok);
            std::ifstream in(entry.path);
            CHECK(in.good());
            std::remove(entry.path.c_str());
        }
    }
    SUBCASE("empty value lists do nothing") {
        ScenarioConfig cfg = parse_scenario_config(bell_doc());
        CHECK(sweep(cfg, "rates.Gamma0", {}, "unused.csv").empty());
    }
    SUBCASE("unknown parameters are reported per entry") {
        ScenarioConfig cfg = parse_scenario_config(bell_doc());
        auto entries = sweep(cfg, "rates.GammaX", {1.0}, "unused.csv");
        REQUIRE(entries.size() == 1);
        CHECK_FALSE(entries[0].ok);
        CHECK(entries[0].error.find("GammaX") != std::string::npos);
    }
    SUBCASE("failed runs do not stop the rest") {
        ScenarioConfig cfg = parse_scenario_config(bell_doc());
        cfg.t_final = 0.2;
        const std::string out = "sweep_fail_test.csv";
        auto entries = sweep(cfg, "nbar", {-1.0, 0.05}, out);
        REQUIRE(entries.size() == 2);
        CHECK_FALSE(entries[0].ok);
        CHECK(entries[1].ok);
        std::remove(entries[1].path.c_str());
    }
    SUBCASE("a colder bath dominates the fidelity curve past the transient") {
        // Not pointwise from t = 0: the warm thermal initial state already
        // overlaps the Fock target (F_warm(0) > 0 while the cold run starts
        // in vacuum, F_cold(0) = 0). Dominance sets in with the pump.
        ScenarioConfig cfg = parse_scenario_config(bell_doc());
        cfg.t_final = 6.0;
        cfg.dt = 5e-4;
        ScenarioConfig cold = cfg;
        set_parameter(cold, "nbar", 0.0);
        RunOutput warm_run = run_scenario(cfg);
        RunOutput cold_run = run_scenario(cold);
        REQUIRE(warm_run.table.rows() == cold_run.table.rows());
        CHECK(cold_run.table(0, 1) < warm_run.table(0, 1));  // the t=0 exception
        for (Eigen::Index i = 0; i < warm_run.table.rows(); ++i) {
            if (warm_run.table(i, 0) < 0.5) continue;
            CHECK(cold_run.table(i, 1) >= warm_run.table(i, 1) - 1e-9);
        }
        CHECK(cold_run.table(cold_run.table.rows() - 1, 1) >
              warm_run.table(warm_run.table.rows() - 1, 1));
    }
}

TEST_CASE("design report") {
    json doc{{"Omega0", 5e5}, {"Omega2", 5e4},   {"Delta", 5e6},
             {"Delta1", 5e6}, {"Delta2", 5e6 / 1.01}, {"lambda", 5e6},
             {"r", 5e3},      {"tau", 2e-4},     {"gamma", 7.5},
             {"ell_max", 2}};
    DesignConfig cfg = parse_design_config(doc);
    DesignReport report = design_report(cfg);

    SUBCASE("rate table spans the quoted order of magnitude") {
        REQUIRE(report.rows.size() == 3);
        CHECK(report.rows[0].rate_over_ref == doctest::Approx(336.675).epsilon(1e-4));
        CHECK(report.rows[0].rate_over_ref > 300.0);
        CHECK(report.rows[2].rate_over_ref < 1500.0);
    }
    SUBCASE("drive requirement scales as sqrt(ell+1)") {
        CHECK(report.rows[1].omega1_required ==
              doctest::Approx(std::sqrt(2.0) * report.rows[0].omega1_required));
    }
    SUBCASE("dispersive inequalities pass at the x10 anchor") {
        CHECK(report.regime.category_pass("dispersive"));
        CHECK(report.regime.category_pass("addressing"));
    }
    SUBCASE("both coupling conventions are reported") {
        CHECK(std::abs(report.couplings.zeta) < report.zeta_single_cavity);
        CHECK(report.zeta_single_cavity == doctest::Approx(5025.0).epsilon(1e-6));
    }
    SUBCASE("switching off the Raman leg zeroes the rate table") {
        json off = doc;
        off["Omega2"] = 0.0;
        DesignReport silent = design_report(parse_design_config(off));
        for (const DesignRow& row : silent.rows) CHECK(row.rate == 0.0);
    }
    SUBCASE("text and JSON renderings carry the rate table") {
        CHECK(report.to_text().find("Gamma/gamma") != std::string::npos);
        json out = report.to_json();
        CHECK(out.at("rates").size() == 3);
        CHECK(out.at("regime").at("checks").size() > 3);
    }
    SUBCASE("unknown fields are rejected") {
        json bad = doc;
        bad["Omega3"] = 1.0;
        CHECK_THROWS_WITH_AS(parse_design_config(bad), doctest::Contains("Omega3"),
                             ConfigError);
    }
}
