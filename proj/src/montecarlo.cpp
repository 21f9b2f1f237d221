#include "driftinfo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "driftinfo/csv.hpp"
#include "driftinfo/rng.hpp"
#include "driftinfo/valuation.hpp"

namespace driftinfo {

void SimConfig::validate() const {
    if (n_paths < 1) throw std::invalid_argument("sim.n_paths must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("sim.dt must be > 0");
}

SimGrid make_grid(const ModelParams& params, const ExpertSchedule& schedule, const SimConfig& config) {
    params.validate();
    config.validate();
    schedule.validate(params.horizon);
    const double T = params.horizon;
    // Guard against T / dt landing a hair above an integer, e.g. 1 / 1e-3.
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(T / config.dt * (1.0 - 1e-12))));

    SimGrid grid;
    grid.step = T / static_cast<double>(steps);
    grid.times.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) grid.times[i] = T * static_cast<double>(i) / static_cast<double>(steps);

    grid.schedule.variances = schedule.variances;
    for (double d : schedule.dates) {
        auto index = static_cast<std::size_t>(std::llround(d / grid.step));
        index = std::min(index, steps - 1);  // a date is always before T
        if (!grid.date_index.empty() && index <= grid.date_index.back()) {
            throw std::invalid_argument("information dates closer than the simulation step (" +
                                        format_exact(grid.step) + ")");
        }
        grid.date_index.push_back(index);
        grid.schedule.dates.push_back(grid.times[index]);
        grid.max_snap_error = std::max(grid.max_snap_error, std::abs(grid.times[index] - d));
    }
    return grid;
}

PathBundle simulate_path(const ModelParams& params, const SimGrid& grid, std::uint64_t seed,
                         std::uint64_t path_index) {
    const std::size_t steps = grid.steps();
    const double h = grid.step;
    CounterRng initial(seed, path_index, Stream::InitialDrift);
    CounterRng drift_noise(seed, path_index, Stream::DriftNoise);
    CounterRng wiener(seed, path_index, Stream::Wiener);
    CounterRng expert(seed, path_index, Stream::ExpertNoise);

    const double decay = std::exp(-params.alpha * h);
    const double transition_sd =
        std::sqrt(params.stationary_variance() * -std::expm1(-2.0 * params.alpha * h));
    const double sqrt_h = std::sqrt(h);

    PathBundle b;
    b.grid = grid.times;
    b.drift.resize(steps + 1);
    b.returns.resize(steps);
    b.wiener_increments.resize(steps);

    b.drift[0] = params.m0 + std::sqrt(params.nu0) * initial.normal();
    for (std::size_t i = 0; i < steps; ++i) {
        const double mu = b.drift[i];
        b.wiener_increments[i] = sqrt_h * wiener.normal();
        b.returns[i] = mu * h + params.sigma * b.wiener_increments[i];
        b.drift[i + 1] = params.delta + decay * (mu - params.delta) + transition_sd * drift_noise.normal();
    }

    b.expert_draws.reserve(grid.date_index.size());
    for (std::size_t k = 0; k < grid.date_index.size(); ++k) {
        const double eps = expert.normal();
        const double variance = grid.schedule.variances[k];
        const double mu = b.drift[grid.date_index[k]];
        b.expert_draws.push_back(is_uninformative(variance) ? std::numeric_limits<double>::quiet_NaN()
                                                            : mu + std::sqrt(variance) * eps);
    }
    return b;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += threads) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

void simulate_paths(const ModelParams& params, const ExpertSchedule& schedule, const SimConfig& config,
                    const std::function<void(std::size_t, const PathBundle&)>& sink) {
    const SimGrid grid = make_grid(params, schedule, config);
    parallel_for(config.n_paths, config.threads,
                 [&](std::size_t i) { sink(i, simulate_path(params, grid, config.seed, i)); });
}

Observations to_observations(const PathBundle& bundle) {
    return Observations{bundle.grid, bundle.returns, bundle.drift, bundle.expert_draws};
}

double wealth_log_terminal(std::span<const double> pi, const PathBundle& bundle, const ModelParams& params,
                           double x0) {
    const std::size_t steps = bundle.returns.size();
    if (pi.size() != steps || bundle.wiener_increments.size() != steps || bundle.drift.size() < steps ||
        bundle.grid.size() != steps + 1) {
        throw std::invalid_argument("strategy and path lengths do not match");
    }
    if (!(x0 > 0.0)) throw std::invalid_argument("initial capital must be > 0");
    const double sigma2 = params.sigma * params.sigma;
    double drift_part = 0.0;
    double noise_part = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double h = bundle.grid[i + 1] - bundle.grid[i];
        drift_part += (pi[i] * bundle.drift[i] - 0.5 * sigma2 * pi[i] * pi[i]) * h;
        noise_part += pi[i] * params.sigma * bundle.wiener_increments[i];
    }
    return std::log(x0) + drift_part + noise_part;
}

double pairwise_sum(std::span<const double> values) noexcept {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const auto half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SampleStats sample_stats(std::span<const double> values) noexcept {
    SampleStats out;
    const auto n = values.size();
    if (n == 0) return out;
    out.mean = pairwise_sum(values) / static_cast<double>(n);
    if (n < 2) return out;
    std::vector<double> squares(n);
    for (std::size_t i = 0; i < n; ++i) squares[i] = (values[i] - out.mean) * (values[i] - out.mean);
    const double variance = pairwise_sum(squares) / static_cast<double>(n - 1);
    out.standard_error = std::sqrt(variance / static_cast<double>(n));
    return out;
}

McEstimate mc_value(Regime regime, const ModelParams& params, const ExpertSchedule& schedule,
                    const SimConfig& config, double x0) {
    const SimGrid grid = make_grid(params, schedule, config);
    std::vector<double> log_wealth(config.n_paths);
    parallel_for(config.n_paths, config.threads, [&](std::size_t i) {
        const PathBundle bundle = simulate_path(params, grid, config.seed, i);
        const FilterTrajectory traj = run_filter(regime, params, grid.schedule, to_observations(bundle));
        std::vector<double> pi(grid.steps());
        for (std::size_t j = 0; j < pi.size(); ++j) pi[j] = optimal_strategy(traj.points[j].mu_hat, params);
        log_wealth[i] = wealth_log_terminal(pi, bundle, params, x0);
    });

    const SampleStats stats = sample_stats(log_wealth);
    McEstimate est;
    est.regime = regime;
    est.n_paths = config.n_paths;
    est.dt = config.dt;
    est.seed = config.seed;
    est.estimate = stats.mean;
    est.standard_error = stats.standard_error;
    est.closed_form = value(regime, x0, params, schedule);
    est.z_score = stats.standard_error > 0.0 ? (stats.mean - est.closed_form) / stats.standard_error : 0.0;
    est.max_snap_error = grid.max_snap_error;
    return est;
}

std::vector<MomentCheck> filter_moment_check(Regime regime, const ModelParams& params,
                                             const ExpertSchedule& schedule, const SimConfig& config,
                                             std::span<const double> times) {
    const SimGrid grid = make_grid(params, schedule, config);
    std::vector<std::size_t> index;
    for (double t : times) {
        if (!(t > 0.0 && t <= params.horizon)) throw std::invalid_argument("moment check times must lie in (0, T]");
        index.push_back(static_cast<std::size_t>(std::llround(t / grid.step)));
    }

    const std::size_t n = config.n_paths;
    std::vector<double> squares(times.size() * n);  // time-major
    parallel_for(n, config.threads, [&](std::size_t i) {
        const PathBundle bundle = simulate_path(params, grid, config.seed, i);
        const FilterTrajectory traj = run_filter(regime, params, grid.schedule, to_observations(bundle));
        for (std::size_t j = 0; j < index.size(); ++j) {
            const double m = traj.points[index[j]].mu_hat;
            squares[j * n + i] = m * m;
        }
    });

    const VarianceCurve curve(regime, params, grid.schedule);
    std::vector<MomentCheck> out;
    for (std::size_t j = 0; j < index.size(); ++j) {
        const double t = grid.times[index[j]];
        const SampleStats stats = sample_stats(std::span<const double>(squares).subspan(j * n, n));
        MomentCheck c;
        c.time = t;
        c.sample_mean = stats.mean;
        c.standard_error = stats.standard_error;
        c.expected = drift_second_moment(params, t) - curve.at(t);
        c.z_score = stats.standard_error > 0.0 ? (stats.mean - c.expected) / stats.standard_error : 0.0;
        out.push_back(c);
    }
    return out;
}

void write_mc_csv(std::ostream& out, std::span<const McEstimate> estimates) {
    CsvWriter csv(out);
    csv.row({"regime", "n_paths", "dt", "seed", "estimate", "standard_error", "closed_form", "z_score"});
    for (const auto& e : estimates) {
        csv.row({std::string(1, regime_tag(e.regime)), std::to_string(e.n_paths), format_number(e.dt),
                 std::to_string(e.seed), format_number(e.estimate), format_number(e.standard_error),
                 format_number(e.closed_form), format_number(e.z_score)});
    }
}

}  // namespace driftinfo
