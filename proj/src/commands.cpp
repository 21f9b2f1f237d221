#include "driftinfo/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "driftinfo/csv.hpp"
#include "driftinfo/filtering.hpp"
#include "driftinfo/montecarlo.hpp"
#include "driftinfo/oracle.hpp"
#include "driftinfo/svg.hpp"
#include "driftinfo/variance_analysis.hpp"

namespace driftinfo {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

template <typename Writer>
void emit(CommandOutput& result, const fs::path& path, Writer&& writer) {
    auto out = open_output(path);
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
    result.files.push_back(path);
}

std::vector<double> uniform_grid(double horizon, std::size_t points) {
    points = std::max<std::size_t>(points, 2);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = horizon * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

std::string regime_label(Regime r) { return std::string(1, regime_tag(r)); }

void put_line(std::ostream& out, const char* line) {
    std::string_view text(line);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    out << text << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------
// variance

CommandOutput cmd_variance(const ExperimentConfig& config, const VarianceOptions& options) {
    config.validate();
    const auto& params = config.model;
    const auto schedule = config.expert_schedule();
    const auto grid = uniform_grid(params.horizon, options.resolution);

    std::vector<FilterTrajectory> trajectories;
    for (Regime r : options.regimes) trajectories.push_back(gamma_trajectory(r, params, schedule, grid));

    std::vector<AsymptoticEnvelope> envelopes;
    const bool equidistant = config.schedule.mode == ScheduleMode::Equidistant && config.schedule.count > 0 &&
                             config.schedule.gamma > 0.0 && std::isfinite(config.schedule.gamma);
    if (equidistant) {
        const double spacing = params.horizon / static_cast<double>(config.schedule.count);
        for (Regime r : options.regimes) {
            if (r == Regime::E || r == Regime::C) envelopes.push_back(envelope(r, params, spacing, config.schedule.gamma));
        }
    }

    CommandOutput result;
    const fs::path dir = config.output.dir;
    emit(result, dir / "variance_trajectories.csv", [&](std::ostream& o) { write_trajectory_csv(o, trajectories); });
    if (!envelopes.empty()) {
        emit(result, dir / "variance_envelope.csv", [&](std::ostream& o) { write_envelope_csv(o, envelopes); });
    }
    if (options.svg || config.output.svg) {
        LineChart chart{"Conditional variance", "t", "gamma", {}};
        for (const auto& traj : trajectories) {
            PlotSeries s{"gamma " + regime_label(traj.regime), {}, {}, false, false};
            for (const auto& p : traj.points) {
                if (p.is_information_date) {
                    s.x.push_back(p.time);
                    s.y.push_back(p.gamma_minus);
                }
                s.x.push_back(p.time);
                s.y.push_back(p.gamma);
            }
            chart.series.push_back(std::move(s));
        }
        for (const auto& e : envelopes) {
            chart.series.push_back({"U " + regime_label(e.regime), {0.0, params.horizon}, {e.upper, e.upper}, true, false});
            chart.series.push_back({"L " + regime_label(e.regime), {0.0, params.horizon}, {e.lower, e.lower}, true, false});
        }
        emit(result, dir / "variance.svg", [&](std::ostream& o) { write_svg(o, chart); });
    }
    return result;
}

// ---------------------------------------------------------------------------
// table2

std::vector<std::size_t> table2_counts() { return {10, 100, 1000, 10000, 100000, 1000000, 10000000}; }

Table2 compute_table2(const ExperimentConfig& config, const std::vector<std::size_t>& counts) {
    config.validate();
    const auto& params = config.model;
    const double gamma = config.schedule.gamma;
    Table2 table;
    table.V_R = value(Regime::R, 1.0, params, {});
    table.V_F = value(Regime::F, 1.0, params, {});
    table.efficiency_R = efficiency(Regime::R, params, {}).efficiency;
    table.efficiency_F = efficiency(Regime::F, params, {}).efficiency;
    table.rows.resize(counts.size());
    parallel_for(counts.size(), config.sim.threads, [&](std::size_t i) {
        const auto schedule = ExpertSchedule::equidistant(counts[i], params.horizon, gamma);
        Table2Row& row = table.rows[i];
        row.count = counts[i];
        row.V_E = value(Regime::E, 1.0, params, schedule);
        row.V_C = value(Regime::C, 1.0, params, schedule);
        row.efficiency_E = efficiency(Regime::E, params, schedule).efficiency;
        row.efficiency_C = efficiency(Regime::C, params, schedule).efficiency;
    });
    return table;
}

void write_table2_text(std::ostream& out, const Table2& table) {
    char line[160];
    const auto v = [](double x) { return format_fixed(x, 4); };
    const auto pct = [](double x) { return format_fixed(100.0 * x, 2); };
    std::snprintf(line, sizeof line, "%-10s %-20s %-20s", "", "V^H(1)", "rho^H [%]");
    put_line(out, line);
    std::snprintf(line, sizeof line, "%-10s %-20s %-20s", "R", v(table.V_R).c_str(), pct(table.efficiency_R).c_str());
    put_line(out, line);
    std::snprintf(line, sizeof line, "%-10s %-9s  %-9s  %-9s  %-9s", "N", "E", "C", "E", "C");
    put_line(out, line);
    for (const auto& row : table.rows) {
        std::snprintf(line, sizeof line, "%-10zu %-9s  %-9s  %-9s  %-9s", row.count, v(row.V_E).c_str(),
                      v(row.V_C).c_str(), pct(row.efficiency_E).c_str(), pct(row.efficiency_C).c_str());
        put_line(out, line);
    }
    std::snprintf(line, sizeof line, "%-10s %-20s %-20s", "F", v(table.V_F).c_str(), pct(table.efficiency_F).c_str());
    put_line(out, line);
}

void write_table2_csv(std::ostream& out, const Table2& table) {
    CsvWriter csv(out);
    csv.row({"N", "regime", "V", "efficiency_percent"});
    csv.row({"", "R", format_fixed(table.V_R, 4), format_fixed(100.0 * table.efficiency_R, 2)});
    for (const auto& row : table.rows) {
        const auto n = std::to_string(row.count);
        csv.row({n, "E", format_fixed(row.V_E, 4), format_fixed(100.0 * row.efficiency_E, 2)});
        csv.row({n, "C", format_fixed(row.V_C, 4), format_fixed(100.0 * row.efficiency_C, 2)});
    }
    csv.row({"", "F", format_fixed(table.V_F, 4), format_fixed(100.0 * table.efficiency_F, 2)});
}

CommandOutput cmd_table2(const ExperimentConfig& config, const std::vector<std::size_t>& counts) {
    const Table2 table = compute_table2(config, counts);
    CommandOutput result;
    const fs::path dir = config.output.dir;
    emit(result, dir / "table2.txt", [&](std::ostream& o) { write_table2_text(o, table); });
    emit(result, dir / "table2.csv", [&](std::ostream& o) { write_table2_csv(o, table); });
    return result;
}

// ---------------------------------------------------------------------------
// efficiency sweep

CommandOutput cmd_efficiency_sweep(const ExperimentConfig& config, const SweepOptions& options) {
    config.validate();
    std::vector<double> values = options.values;
    if (values.empty()) {
        if (options.variable == SweepVariable::ExpertCount) {
            for (int n = 1; n <= 100; ++n) values.push_back(n);
        } else {
            for (int i = 1; i <= 40; ++i) values.push_back(0.05 * i);
        }
    }

    struct Variant {
        const char* name;
        ModelParams params;
    };
    std::vector<Variant> variants{{"unknown", config.model}};
    if (options.known_vs_unknown) variants.push_back({"known", with_known_start(config.model)});

    const bool by_count = options.variable == SweepVariable::ExpertCount;
    std::vector<std::array<double, 4>> rows(values.size() * variants.size());
    parallel_for(rows.size(), config.sim.threads, [&](std::size_t idx) {
        const auto& variant = variants[idx / values.size()];
        const double x = values[idx % values.size()];
        ExpertSchedule schedule;
        if (by_count) {
            if (x < 0.0 || x != std::floor(x)) throw std::invalid_argument("expert counts must be whole numbers");
            schedule = ExpertSchedule::equidistant(static_cast<std::size_t>(x), variant.params.horizon,
                                                   config.schedule.gamma);
        } else {
            if (!(x > 0.0)) throw std::invalid_argument("sqrt(Gamma) values must be positive");
            schedule = ExpertSchedule::equidistant(config.schedule.count, variant.params.horizon, x * x);
        }
        for (Regime r : kAllRegimes) {
            rows[idx][regime_index(r)] = efficiency(r, variant.params, schedule).efficiency;
        }
    });

    CommandOutput result;
    const fs::path dir = config.output.dir;
    const char* sweep_name = by_count ? "N" : "sqrt_gamma";
    emit(result, dir / "efficiency_sweep.csv", [&](std::ostream& o) {
        CsvWriter csv(o);
        csv.row({"sweep", "value", "initial", "rho_R", "rho_E", "rho_C", "rho_F"});
        for (std::size_t idx = 0; idx < rows.size(); ++idx) {
            const auto& r = rows[idx];
            csv.row({sweep_name, format_number(values[idx % values.size()]), variants[idx / values.size()].name,
                     format_number(r[0]), format_number(r[1]), format_number(r[2]), format_number(r[3])});
        }
    });
    if (options.svg || config.output.svg) {
        LineChart chart{"Efficiency", by_count ? "N" : "sqrt(Gamma)", "rho", {}};
        for (std::size_t v = 0; v < variants.size(); ++v) {
            for (Regime reg : kAllRegimes) {
                PlotSeries s{std::string("rho ") + regime_tag(reg) + " " + variants[v].name, values, {}, v > 0, false};
                for (std::size_t i = 0; i < values.size(); ++i) s.y.push_back(rows[v * values.size() + i][regime_index(reg)]);
                chart.series.push_back(std::move(s));
            }
        }
        emit(result, dir / "efficiency_sweep.svg", [&](std::ostream& o) { write_svg(o, chart); });
    }
    return result;
}

// ---------------------------------------------------------------------------
// simulate

CommandOutput cmd_simulate(const ExperimentConfig& config, const SimulateOptions& options) {
    config.validate();
    const auto& params = config.model;
    const SimGrid grid = make_grid(params, config.expert_schedule(), config.sim);
    const PathBundle bundle = simulate_path(params, grid, config.sim.seed, options.path_index);
    const Observations obs = to_observations(bundle);

    std::vector<FilterTrajectory> trajectories;
    for (Regime r : options.regimes) trajectories.push_back(run_filter(r, params, grid.schedule, obs));

    CommandOutput result;
    const fs::path dir = config.output.dir;
    emit(result, dir / "simulate_path.csv", [&](std::ostream& o) {
        CsvWriter csv(o);
        std::vector<std::string> header{"time", "return", "integrated_drift", "drift"};
        for (const auto& t : trajectories) {
            header.push_back("mu_hat_" + regime_label(t.regime));
            header.push_back("gamma_" + regime_label(t.regime));
        }
        csv.row_range(header);
        double cumulative_return = 0.0;
        double cumulative_drift = 0.0;
        for (std::size_t i = 0; i < bundle.grid.size(); ++i) {
            if (i > 0) {
                cumulative_return += bundle.returns[i - 1];
                cumulative_drift += bundle.drift[i - 1] * grid.step;
            }
            std::vector<std::string> row{format_number(bundle.grid[i]), format_number(cumulative_return),
                                         format_number(cumulative_drift), format_number(bundle.drift[i])};
            for (const auto& t : trajectories) {
                row.push_back(format_number(t.points[i].mu_hat));
                row.push_back(format_number(t.points[i].gamma));
            }
            csv.row_range(row);
        }
    });
    emit(result, dir / "simulate_views.csv", [&](std::ostream& o) {
        CsvWriter csv(o);
        csv.row({"date", "view", "expert_variance", "drift"});
        for (std::size_t k = 0; k < grid.date_index.size(); ++k) {
            csv.row({format_number(grid.schedule.dates[k]), format_number(bundle.expert_draws[k]),
                     format_number(grid.schedule.variances[k]), format_number(bundle.drift[grid.date_index[k]])});
        }
    });
    emit(result, dir / "simulate_filters.csv", [&](std::ostream& o) { write_trajectory_csv(o, trajectories); });

    if (options.svg || config.output.svg) {
        LineChart drift_chart{"Drift and filters", "t", "mu", {}};
        drift_chart.series.push_back({"drift", bundle.grid, bundle.drift, false, false});
        LineChart gamma_chart{"Conditional variances", "t", "gamma", {}};
        for (const auto& t : trajectories) {
            PlotSeries mu{"mu_hat " + regime_label(t.regime), {}, {}, false, false};
            PlotSeries g{"gamma " + regime_label(t.regime), {}, {}, false, false};
            for (const auto& p : t.points) {
                if (p.is_information_date) {
                    mu.x.push_back(p.time);
                    mu.y.push_back(p.mu_hat_minus);
                    g.x.push_back(p.time);
                    g.y.push_back(p.gamma_minus);
                }
                mu.x.push_back(p.time);
                mu.y.push_back(p.mu_hat);
                g.x.push_back(p.time);
                g.y.push_back(p.gamma);
            }
            drift_chart.series.push_back(std::move(mu));
            gamma_chart.series.push_back(std::move(g));
        }
        drift_chart.series.push_back({"views", grid.schedule.dates, bundle.expert_draws, false, true});
        emit(result, dir / "simulate_drift.svg", [&](std::ostream& o) { write_svg(o, drift_chart); });
        emit(result, dir / "simulate_gamma.svg", [&](std::ostream& o) { write_svg(o, gamma_chart); });
    }
    return result;
}

// ---------------------------------------------------------------------------
// validate

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

namespace {

double corrupted_update(double gamma_minus, double gamma_expert) {
    return is_uninformative(gamma_expert) ? gamma_minus : gamma_minus + gamma_expert;
}

void add_check(ValidationReport& report, std::string name, double observed, double tolerance) {
    report.checks.push_back({std::move(name), observed, tolerance, observed <= tolerance});
}

}  // namespace

ValidationReport run_validation(const ExperimentConfig& config, const ValidationOptions& options) {
    config.validate();
    const auto& params = config.model;
    const auto schedule = config.expert_schedule();
    ValidationReport report;

    {
        std::vector<double> times(100);
        for (std::size_t i = 0; i < times.size(); ++i) {
            times[i] = params.horizon * static_cast<double>(i + 1) / static_cast<double>(times.size());
        }
        const auto ode = oracle::riccati_ode(params, params.nu0, times);
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            worst = std::max(worst, std::abs(gamma_R_closed(params, times[i]) - ode[i]));
        }
        add_check(report, "riccati_closed_vs_ode", worst, 1e-8);
    }

    for (Regime r : {Regime::R, Regime::E, Regime::C}) {
        const double gap = std::abs(B_closed(r, params, schedule) - B_oracle(r, params, schedule));
        add_check(report, std::string("B_closed_vs_quadrature_") + regime_tag(r), gap, 1e-7);
    }

    const bool equidistant = config.schedule.mode == ScheduleMode::Equidistant && config.schedule.count > 0 &&
                             config.schedule.gamma > 0.0 && std::isfinite(config.schedule.gamma);
    if (equidistant) {
        const double spacing = params.horizon / static_cast<double>(config.schedule.count);
        for (Regime r : {Regime::E, Regime::C}) {
            const auto env = envelope(r, params, spacing, config.schedule.gamma);
            const auto fixed = envelope_oracle(r, params, spacing, config.schedule.gamma);
            add_check(report, std::string("envelope_vs_fixed_point_") + regime_tag(r),
                      std::max(std::abs(env.upper - fixed.upper), std::abs(env.lower - fixed.lower)), 1e-10);
        }
    }

    {
        const VarianceUpdate update = options.corrupt_update ? &corrupted_update : &bayes_variance;
        const VarianceCurve curve_R(Regime::R, params, schedule);
        const VarianceCurve curve_E(Regime::E, params, schedule);
        const VarianceCurve curve_C(Regime::C, params, schedule, update);
        std::vector<double> times = uniform_grid(params.horizon, 2001);
        times.insert(times.end(), schedule.dates.begin(), schedule.dates.end());
        double worst_E = -std::numeric_limits<double>::infinity();
        double worst_R = worst_E;
        for (double t : times) {
            for (bool left : {false, true}) {
                const double c = left ? curve_C.left_limit(t) : curve_C.at(t);
                const double e = left ? curve_E.left_limit(t) : curve_E.at(t);
                const double rr = left ? curve_R.left_limit(t) : curve_R.at(t);
                worst_E = std::max(worst_E, c - e);
                worst_R = std::max(worst_R, c - rr);
            }
        }
        add_check(report, "dominance_C_le_E", worst_E, 1e-12);
        add_check(report, "dominance_C_le_R", worst_R, 1e-12);

        double worst_update = -std::numeric_limits<double>::infinity();
        for (const VarianceCurve* curve : {&curve_E, &curve_C}) {
            for (std::size_t k = 0; k < curve->dates().size(); ++k) {
                const double bound = std::min(curve->pre_update()[k], schedule.variances[k]);
                worst_update = std::max(worst_update, curve->post_update()[k] - bound);
            }
        }
        if (std::isfinite(worst_update)) add_check(report, "update_contraction", worst_update, 0.0);
    }

    {
        const ValueReport values = value_report(1.0, params, schedule);
        const auto V = [&](Regime r) { return values.V[regime_index(r)]; };
        const double violation = std::max({V(Regime::C) - V(Regime::F), V(Regime::E) - V(Regime::C),
                                           V(Regime::R) - V(Regime::C)});
        add_check(report, "value_ordering", violation, 1e-12);
    }

    if (options.monte_carlo) {
        const double allowance = discretization_allowance(config.sim.dt);
        const SimGrid grid = make_grid(params, schedule, config.sim);
        add_check(report, "mc_date_snap_error", grid.max_snap_error, 0.5 * grid.step);
        for (Regime r : kAllRegimes) {
            const McEstimate est = mc_value(r, params, schedule, config.sim, 1.0);
            add_check(report, std::string("mc_value_") + regime_tag(r), std::abs(est.estimate - est.closed_form),
                      3.0 * est.standard_error + allowance);
        }
        std::vector<double> times;
        for (double f : {0.101, 0.25, 0.5, 0.733, 0.95}) times.push_back(f * params.horizon);
        for (Regime r : kAllRegimes) {
            double worst = 0.0;
            for (const auto& c : filter_moment_check(r, params, schedule, config.sim, times)) {
                worst = std::max(worst, std::abs(c.z_score));
            }
            add_check(report, std::string("second_moment_identity_") + regime_tag(r), worst, 3.0);
        }
    }
    return report;
}

void write_validation_csv(std::ostream& out, const ValidationReport& report) {
    CsvWriter csv(out);
    csv.row({"check", "observed", "tolerance", "status"});
    for (const auto& c : report.checks) {
        csv.row({c.name, format_number(c.observed), format_number(c.tolerance), c.passed ? "pass" : "FAIL"});
    }
}

CommandOutput cmd_validate(const ExperimentConfig& config, const ValidationOptions& options,
                           ValidationReport& report) {
    report = run_validation(config, options);
    CommandOutput result;
    emit(result, fs::path(config.output.dir) / "validate_report.csv",
         [&](std::ostream& o) { write_validation_csv(o, report); });
    return result;
}

// ---------------------------------------------------------------------------
// value

void write_value_report_text(std::ostream& out, const ValueReport& report) {
    char line[160];
    std::snprintf(line, sizeof line, "x0 = %s   A = %s", format_number(report.x0).c_str(),
                  format_number(report.A).c_str());
    put_line(out, line);
    std::snprintf(line, sizeof line, "%-7s %-12s %-12s %-12s %-12s", "regime", "B", "V(x0)", "x0_required",
                  "rho [%]");
    put_line(out, line);
    for (Regime r : kAllRegimes) {
        const auto i = regime_index(r);
        std::snprintf(line, sizeof line, "%-7c %-12s %-12s %-12s %-12s", regime_tag(r),
                      format_number(report.B[i]).c_str(), format_fixed(report.V[i], 4).c_str(),
                      format_number(report.required_capital[i]).c_str(),
                      format_fixed(100.0 * report.efficiency[i], 2).c_str());
        put_line(out, line);
    }
}

CommandOutput cmd_value(const ExperimentConfig& config, double x0, ValueReport& report) {
    config.validate();
    report = value_report(x0, config.model, config.expert_schedule());
    CommandOutput result;
    emit(result, fs::path(config.output.dir) / "value_report.csv",
         [&](std::ostream& o) { write_value_report_csv(o, report); });
    return result;
}

}  // namespace driftinfo
