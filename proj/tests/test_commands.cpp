#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "driftinfo/commands.hpp"
#include "driftinfo/variance_analysis.hpp"

using namespace driftinfo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("driftinfo_test_" + name);
    fs::remove_all(dir);
    return dir;
}

using Table = std::vector<std::map<std::string, std::string>>;

Table read_csv(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    std::stringstream hs(line);
    for (std::string f; std::getline(hs, f, ',');) header.push_back(f);
    Table rows;
    while (std::getline(in, line)) {
        std::map<std::string, std::string> row;
        std::stringstream ls(line);
        std::string f;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (!std::getline(ls, f, ',')) f.clear();
            row[header[i]] = f;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ExperimentConfig base_config(const std::string& name) {
    ExperimentConfig cfg;
    cfg.output.dir = scratch(name).string();
    return cfg;
}

}  // namespace

TEST_CASE("table reproduction matches the golden files") {
    ExperimentConfig cfg = base_config("table2");
    const std::vector<std::size_t> counts{10, 100};
    const auto out = cmd_table2(cfg, counts);
    REQUIRE(out.files.size() == 2);
    const fs::path golden = DRIFTINFO_GOLDEN_DIR;
    CHECK(slurp(out.files[0]) == slurp(golden / "table2_N10_N100.txt"));
    CHECK(slurp(out.files[1]) == slurp(golden / "table2_N10_N100.csv"));
}

TEST_CASE("variance command") {
    ExperimentConfig cfg = base_config("variance");
    cfg.model = long_run_market();
    cfg.schedule.count = 20;
    cfg.schedule.gamma = 1.0;
    VarianceOptions opts;
    opts.regimes = {Regime::R, Regime::E, Regime::C, Regime::F};
    opts.resolution = 201;
    opts.svg = true;
    const auto out = cmd_variance(cfg, opts);
    REQUIRE(out.files.size() == 3);

    const Table traj = read_csv(out.files[0]);
    std::map<std::string, std::vector<double>> gamma;
    for (const auto& row : traj) gamma[row.at("regime")].push_back(std::stod(row.at("gamma")));
    for (double g : gamma["F"]) CHECK(g == 0.0);
    REQUIRE(gamma["C"].size() == gamma["R"].size());
    for (std::size_t i = 0; i < gamma["C"].size(); ++i) CHECK(gamma["C"][i] <= gamma["R"][i]);

    const Table env = read_csv(out.files[1]);
    REQUIRE(env.size() == 2);
    CHECK(env[0].at("regime") == "E");
    CHECK(std::stod(env[1].at("U")) ==
          doctest::Approx(envelope(Regime::C, cfg.model, 0.05, 1.0).upper).epsilon(1e-5));
    CHECK(slurp(out.files[2]).rfind("<svg", 0) == 0);

    ExperimentConfig none = base_config("variance_none");
    none.schedule.count = 0;
    VarianceOptions rc;
    rc.regimes = {Regime::R, Regime::C};
    const auto out0 = cmd_variance(none, rc);
    REQUIRE(out0.files.size() == 1);
    const Table t0 = read_csv(out0.files[0]);
    const std::size_t half = t0.size() / 2;
    for (std::size_t i = 0; i < half; ++i) CHECK(t0[i].at("gamma") == t0[i + half].at("gamma"));
}

TEST_CASE("efficiency sweeps") {
    SUBCASE("over the number of experts") {
        ExperimentConfig cfg = base_config("sweep_n");
        SweepOptions opts;
        opts.values = {1, 2, 5, 10, 20, 50, 100};
        opts.known_vs_unknown = true;
        const Table rows = read_csv(cmd_efficiency_sweep(cfg, opts).files[0]);
        REQUIRE(rows.size() == 14);
        double last_e = 0.0;
        double last_c = 0.0;
        for (std::size_t i = 0; i < 7; ++i) {
            const auto& r = rows[i];
            CHECK(r.at("initial") == "unknown");
            CHECK(r.at("rho_R") == rows[0].at("rho_R"));
            const double e = std::stod(r.at("rho_E"));
            const double c = std::stod(r.at("rho_C"));
            CHECK(e <= c);
            CHECK(e >= last_e);
            CHECK(c >= last_c);
            last_e = e;
            last_c = c;
            CHECK(std::stod(rows[i + 7].at("rho_C")) >= c);
        }
    }
    SUBCASE("over expert reliability") {
        ExperimentConfig cfg = base_config("sweep_g");
        SweepOptions opts;
        opts.variable = SweepVariable::ExpertStdDev;
        opts.values = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 10.0, 1000.0};
        const Table rows = read_csv(cmd_efficiency_sweep(cfg, opts).files[0]);
        REQUIRE(rows.size() == 8);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(std::stod(rows[i].at("rho_E")) <= std::stod(rows[i - 1].at("rho_E")));
            CHECK(std::stod(rows[i].at("rho_C")) <= std::stod(rows[i - 1].at("rho_C")));
        }
        CHECK(std::stod(rows.back().at("rho_C")) == doctest::Approx(std::stod(rows.back().at("rho_R"))).epsilon(1e-4));
    }
}

TEST_CASE("simulate command") {
    ExperimentConfig cfg = base_config("simulate");
    cfg.schedule.count = 6;
    cfg.schedule.gamma = 0.04;
    SimulateOptions opts;
    opts.svg = true;
    const auto out = cmd_simulate(cfg, opts);
    CHECK(out.files.size() == 5);
    CHECK(read_csv(out.files[1]).size() == 6);

    const Table filters = read_csv(out.files[2]);
    int jumps = 0;
    for (const auto& r : filters) {
        if (r.at("is_information_date") == "1" && (r.at("regime") == "E" || r.at("regime") == "C")) {
            CHECK(std::stod(r.at("gamma")) < std::stod(r.at("gamma_minus")));
            ++jumps;
        }
    }
    CHECK(jumps == 12);

    const std::string first = slurp(out.files[0]);
    const auto again = cmd_simulate(cfg, opts);
    CHECK(slurp(again.files[0]) == first);

    ExperimentConfig known = base_config("simulate_known");
    known.model = with_known_start(known.model);
    const Table start = read_csv(cmd_simulate(known, {}).files[0]);
    for (const char* col : {"gamma_R", "gamma_E", "gamma_C", "gamma_F"}) CHECK(start[0].at(col) == "0");
}

TEST_CASE("validation") {
    ExperimentConfig cfg = base_config("validate");
    ValidationOptions quick;
    quick.monte_carlo = false;
    const ValidationReport ok = run_validation(cfg, quick);
    CHECK(ok.passed());
    CHECK(ok.checks.size() >= 10);

    quick.corrupt_update = true;
    ValidationReport broken;
    const auto files = cmd_validate(cfg, quick, broken);
    CHECK_FALSE(broken.passed());
    const auto bad = std::find_if(broken.checks.begin(), broken.checks.end(),
                                  [](const ValidationCheck& c) { return c.name == "dominance_C_le_E"; });
    REQUIRE(bad != broken.checks.end());
    CHECK_FALSE(bad->passed);
    CHECK(bad->observed > bad->tolerance);
    const std::string report = slurp(files.files[0]);
    CHECK(report.rfind("check,observed,tolerance,status\n", 0) == 0);
    CHECK(report.find("dominance_C_le_E,") != std::string::npos);
    CHECK(report.find(",FAIL\n") != std::string::npos);
}

TEST_CASE("coarser simulation step widens the Monte Carlo allowance") {
    ExperimentConfig cfg = base_config("validate_dt");
    cfg.sim.n_paths = 500;
    const auto allowance_gap = [&](double dt) {
        cfg.sim.dt = dt;
        const ValidationReport rep = run_validation(cfg, {});
        for (const auto& c : rep.checks) {
            if (c.name == "mc_value_C") {
                const McEstimate est = mc_value(Regime::C, cfg.model, cfg.expert_schedule(), cfg.sim, 1.0);
                return c.tolerance - 3.0 * est.standard_error;
            }
        }
        FAIL("mc_value_C missing");
        return 0.0;
    };
    CHECK(allowance_gap(1e-3) == doctest::Approx(0.002).epsilon(1e-9));
    CHECK(allowance_gap(0.05) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("outputs do not depend on the thread count") {
    ExperimentConfig cfg = base_config("threads");
    cfg.sim.n_paths = 300;
    cfg.sim.dt = 1e-2;
    std::vector<std::string> outputs;
    for (unsigned threads : {1u, 4u}) {
        cfg.sim.threads = threads;
        std::string all;
        for (const auto& f : cmd_table2(cfg, {10, 1000}).files) all += slurp(f);
        for (const auto& f : cmd_simulate(cfg, {}).files) all += slurp(f);
        ValidationReport rep;
        for (const auto& f : cmd_validate(cfg, {}, rep).files) all += slurp(f);
        outputs.push_back(all);
    }
    CHECK(outputs[0] == outputs[1]);
}

TEST_CASE("value command") {
    ExperimentConfig cfg = base_config("value");
    ValueReport rep;
    const auto out = cmd_value(cfg, 2.0, rep);
    CHECK(rep.x0 == 2.0);
    const Table rows = read_csv(out.files[0]);
    REQUIRE(rows.size() == 4);
    CHECK(rows[3].at("regime") == "F");
    std::ostringstream text;
    write_value_report_text(text, rep);
    CHECK(text.str().find("x0 = 2") != std::string::npos);
}

TEST_CASE("unwritable output directory is reported with its path") {
    ExperimentConfig cfg;
    cfg.output.dir = "/proc/driftinfo_cannot_write_here";
    ValueReport rep;
    try {
        (void)cmd_value(cfg, 1.0, rep);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("/proc/driftinfo_cannot_write_here") != std::string::npos);
    }
}
