#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "driftinfo/commands.hpp"
#include "driftinfo/config.hpp"
#include "driftinfo/regime.hpp"

using namespace driftinfo;

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    bool svg = false;
};

ExperimentConfig resolve_config(const GlobalFlags& flags) {
    ExperimentConfig config = flags.config_path.empty() ? ExperimentConfig{} : load_config(flags.config_path);
    if (!flags.out_dir.empty()) config.output.dir = flags.out_dir;
    if (flags.seed) config.sim.seed = *flags.seed;
    if (flags.threads) config.sim.threads = *flags.threads;
    if (flags.svg) config.output.svg = true;
    config.validate();
    return config;
}

void report(const CommandOutput& out) {
    for (const auto& f : out.files) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Drift filtering with expert opinions: filters, values and Monte Carlo checks"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("--config", flags.config_path, "Config file (section.key = value)")->check(CLI::ExistingFile);
    app.add_option("--out", flags.out_dir, "Output directory (overrides output.dir)");
    app.add_option("--seed", flags.seed, "Simulation seed (overrides sim.seed)");
    app.add_option("--threads", flags.threads, "Worker threads, 0 = all cores (overrides sim.threads)");
    app.add_flag("--svg", flags.svg, "Also write SVG plots");

    std::string regimes_text = "R,E,C";
    std::size_t resolution = 1000;
    auto* variance = app.add_subcommand("variance", "Conditional variance trajectories and envelopes");
    variance->add_option("--regimes", regimes_text, "Comma-separated regimes")->capture_default_str();
    variance->add_option("--resolution", resolution, "Uniform grid points on [0, T]")->capture_default_str();

    std::vector<std::size_t> counts;
    auto* table2 = app.add_subcommand("table2", "Values and efficiencies for equidistant experts");
    table2->add_option("--counts", counts, "Expert counts (default 10 to 10^7)")->delimiter(',');

    std::string over = "N";
    std::vector<double> sweep_values;
    bool known_vs_unknown = false;
    auto* sweep = app.add_subcommand("efficiency-sweep", "Efficiency as a function of N or sqrt(Gamma)");
    sweep->add_option("--over", over, "Sweep variable")->check(CLI::IsMember({"N", "sqrt-gamma"}))->capture_default_str();
    sweep->add_option("--values", sweep_values, "Sweep values (default built-in range)")->delimiter(',');
    sweep->add_flag("--known-vs-unknown", known_vs_unknown, "Add rows with a known initial drift");

    std::string sim_regimes_text = "R,E,C,F";
    std::uint64_t path_index = 0;
    auto* simulate = app.add_subcommand("simulate", "One simulated path with all filters");
    simulate->add_option("--regimes", sim_regimes_text, "Comma-separated regimes")->capture_default_str();
    simulate->add_option("--path", path_index, "Path index within the seeded run")->capture_default_str();

    bool no_mc = false;
    bool corrupt = false;
    auto* validate = app.add_subcommand("validate", "Run every oracle check; exit status 1 on any breach");
    validate->add_flag("--no-mc", no_mc, "Skip the Monte Carlo checks");
    validate->add_flag("--corrupt-update", corrupt, "Fault injection: break the combined variance update");

    double x0 = 1.0;
    auto* value_cmd = app.add_subcommand("value", "Closed-form values and efficiencies for one point");
    value_cmd->add_option("--x0", x0, "Initial capital")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig config = resolve_config(flags);
        if (variance->parsed()) {
            VarianceOptions opts;
            opts.regimes = parse_regime_list(regimes_text);
            opts.resolution = resolution;
            report(cmd_variance(config, opts));
        } else if (table2->parsed()) {
            report(cmd_table2(config, counts.empty() ? table2_counts() : counts));
        } else if (sweep->parsed()) {
            SweepOptions opts;
            opts.variable = over == "N" ? SweepVariable::ExpertCount : SweepVariable::ExpertStdDev;
            opts.values = sweep_values;
            opts.known_vs_unknown = known_vs_unknown;
            report(cmd_efficiency_sweep(config, opts));
        } else if (simulate->parsed()) {
            SimulateOptions opts;
            opts.regimes = parse_regime_list(sim_regimes_text);
            opts.path_index = path_index;
            report(cmd_simulate(config, opts));
        } else if (validate->parsed()) {
            ValidationOptions opts;
            opts.monte_carlo = !no_mc;
            opts.corrupt_update = corrupt;
            ValidationReport result;
            report(cmd_validate(config, opts, result));
            for (const auto& c : result.checks) {
                if (!c.passed) {
                    std::cerr << "breach: " << c.name << " observed " << c.observed << " tolerance " << c.tolerance
                              << '\n';
                }
            }
            return result.passed() ? 0 : 1;
        } else if (value_cmd->parsed()) {
            ValueReport result;
            const auto out = cmd_value(config, x0, result);
            write_value_report_text(std::cout, result);
            report(out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
