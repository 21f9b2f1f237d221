#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "driftinfo/config.hpp"
#include "driftinfo/regime.hpp"
#include "driftinfo/valuation.hpp"

namespace driftinfo {

/// Files written by a command, in write order.
struct CommandOutput {
    std::vector<std::filesystem::path> files;
};

struct VarianceOptions {
    std::vector<Regime> regimes{Regime::R, Regime::E, Regime::C};
    std::size_t resolution = 1000;  ///< uniform grid points on [0, T], dates are added
    bool svg = false;
};

/// variance_trajectories.csv, variance_envelope.csv (equidistant schedules) and variance.svg.
CommandOutput cmd_variance(const ExperimentConfig& config, const VarianceOptions& options);

/// Default expert counts, 10 through 10^7.
[[nodiscard]] std::vector<std::size_t> table2_counts();

struct Table2Row {
    std::size_t count = 0;
    double V_E = 0.0;
    double V_C = 0.0;
    double efficiency_E = 0.0;
    double efficiency_C = 0.0;
};

struct Table2 {
    double V_R = 0.0;
    double V_F = 0.0;
    double efficiency_R = 0.0;
    double efficiency_F = 0.0;
    std::vector<Table2Row> rows;
};

/// Values at x0 = 1 for equidistant experts with the config's variance, one row per count.
[[nodiscard]] Table2 compute_table2(const ExperimentConfig& config, const std::vector<std::size_t>& counts);

/// Text layout with 4 decimals for values and 2 for efficiencies in percent.
void write_table2_text(std::ostream& out, const Table2& table);

/// CSV with header N,regime,V,efficiency_percent; N is empty for R and F.
void write_table2_csv(std::ostream& out, const Table2& table);

/// table2.txt and table2.csv.
CommandOutput cmd_table2(const ExperimentConfig& config, const std::vector<std::size_t>& counts);

enum class SweepVariable { ExpertCount, ExpertStdDev };

struct SweepOptions {
    SweepVariable variable = SweepVariable::ExpertCount;
    std::vector<double> values;  ///< counts or sqrt(Gamma) values; empty = built-in range
    bool known_vs_unknown = false;
    bool svg = false;
};

/// efficiency_sweep.csv with header sweep,value,initial,rho_R,rho_E,rho_C,rho_F.
/// The known-initial rows use nu0 = 0, m0 = delta.
CommandOutput cmd_efficiency_sweep(const ExperimentConfig& config, const SweepOptions& options);

struct SimulateOptions {
    std::vector<Regime> regimes{Regime::R, Regime::E, Regime::C, Regime::F};
    std::uint64_t path_index = 0;
    bool svg = false;
};

/// One simulated path: simulate_path.csv (returns, drift, filters and variances per
/// regime), simulate_views.csv (expert views) and simulate_filters.csv (trajectory format).
CommandOutput cmd_simulate(const ExperimentConfig& config, const SimulateOptions& options);

struct ValidationCheck {
    std::string name;
    double observed = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct ValidationOptions {
    bool monte_carlo = true;
    /// Test hook: replaces the variance update of the combined filter with gamma + Gamma.
    bool corrupt_update = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    [[nodiscard]] bool passed() const;
};

[[nodiscard]] ValidationReport run_validation(const ExperimentConfig& config, const ValidationOptions& options);

/// CSV with header check,observed,tolerance,status.
void write_validation_csv(std::ostream& out, const ValidationReport& report);

/// validate_report.csv; the report is also returned through `report`.
CommandOutput cmd_validate(const ExperimentConfig& config, const ValidationOptions& options,
                           ValidationReport& report);

/// value_report.csv for x0.
CommandOutput cmd_value(const ExperimentConfig& config, double x0, ValueReport& report);

/// Human-readable form of a value report.
void write_value_report_text(std::ostream& out, const ValueReport& report);

}  // namespace driftinfo
