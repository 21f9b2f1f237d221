#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "driftinfo/filtering.hpp"
#include "driftinfo/market_model.hpp"
#include "driftinfo/regime.hpp"

namespace driftinfo {

inline constexpr std::uint64_t kDefaultSeed = 0x5EEDF00DCAFEULL;

struct SimConfig {
    std::size_t n_paths = 10'000;
    double dt = 1e-3;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;  ///< 0 = one per hardware thread; results do not depend on it

    void validate() const;
    bool operator==(const SimConfig&) const = default;
};

/// Uniform simulation grid with the information dates snapped onto it.
///
/// The step count is ceil(T / dt), so the actual step is T / steps <= dt.
struct SimGrid {
    std::vector<double> times;
    double step = 0.0;
    ExpertSchedule schedule;               ///< dates moved to their grid points
    std::vector<std::size_t> date_index;   ///< grid index of every date
    double max_snap_error = 0.0;

    [[nodiscard]] std::size_t steps() const noexcept { return times.size() - 1; }
};

/// Throws std::invalid_argument if two dates land on the same grid point.
[[nodiscard]] SimGrid make_grid(const ModelParams& params, const ExpertSchedule& schedule, const SimConfig& config);

/// One simulated market path. returns[i] = drift[i] * step + sigma * wiener_increments[i].
struct PathBundle {
    std::vector<double> grid;
    std::vector<double> drift;
    std::vector<double> returns;
    std::vector<double> wiener_increments;
    std::vector<double> expert_draws;
};

/// Path `path_index` of the run keyed by `seed`: exact Gaussian transitions for the
/// drift, Euler increments for the returns, Z_k = mu(t_k) + sqrt(Gamma_k) eps_k.
[[nodiscard]] PathBundle simulate_path(const ModelParams& params, const SimGrid& grid, std::uint64_t seed,
                                       std::uint64_t path_index);

/// Generates paths 0..n_paths-1 and hands each to `sink` together with its index.
/// Paths are processed in parallel; `sink` must be safe to call concurrently.
void simulate_paths(const ModelParams& params, const ExpertSchedule& schedule, const SimConfig& config,
                    const std::function<void(std::size_t, const PathBundle&)>& sink);

[[nodiscard]] Observations to_observations(const PathBundle& bundle);

/// log x0 + sum_i (pi_i mu_i - sigma^2 pi_i^2 / 2) dt + sum_i pi_i sigma dW_i.
/// `pi` holds one fraction per step. Throws std::invalid_argument on length mismatch.
[[nodiscard]] double wealth_log_terminal(std::span<const double> pi, const PathBundle& bundle,
                                         const ModelParams& params, double x0);

struct McEstimate {
    Regime regime = Regime::F;
    std::size_t n_paths = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double standard_error = 0.0;
    double closed_form = 0.0;
    double z_score = 0.0;
    double max_snap_error = 0.0;
};

/// Monte Carlo estimate of E[log X_T] under the log-optimal strategy of `regime`,
/// next to the closed-form value.
[[nodiscard]] McEstimate mc_value(Regime regime, const ModelParams& params, const ExpertSchedule& schedule,
                                  const SimConfig& config, double x0);

struct MomentCheck {
    double time = 0.0;
    double sample_mean = 0.0;
    double standard_error = 0.0;
    double expected = 0.0;
    double z_score = 0.0;
};

/// Compares the sample mean of mu_hat(t)^2 with nu_t + m_t^2 - gamma_t for each t,
/// which is snapped to the nearest grid point.
[[nodiscard]] std::vector<MomentCheck> filter_moment_check(Regime regime, const ModelParams& params,
                                                           const ExpertSchedule& schedule, const SimConfig& config,
                                                           std::span<const double> times);

/// Pairwise (tree) summation; the result depends only on the order of `values`.
[[nodiscard]] double pairwise_sum(std::span<const double> values) noexcept;

struct SampleStats {
    double mean = 0.0;
    double standard_error = 0.0;
};

[[nodiscard]] SampleStats sample_stats(std::span<const double> values) noexcept;

/// Runs body(i) for i in [0, count) on `threads` workers (0 = hardware concurrency).
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Allowance added to 3 standard errors when comparing Monte Carlo and closed-form
/// values: twice the step, i.e. 0.002 at dt = 1e-3 (first-order weak error).
[[nodiscard]] constexpr double discretization_allowance(double dt) noexcept { return 2.0 * dt; }

/// CSV with header regime,n_paths,dt,seed,estimate,standard_error,closed_form,z_score.
void write_mc_csv(std::ostream& out, std::span<const McEstimate> estimates);

}  // namespace driftinfo
