#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "driftinfo/market_model.hpp"
#include "driftinfo/regime.hpp"

namespace driftinfo {

/// Expert variance of a view that carries no information. Updates with it are exact no-ops.
inline constexpr double kUninformative = std::numeric_limits<double>::infinity();

[[nodiscard]] inline bool is_uninformative(double gamma_expert) noexcept {
    return gamma_expert == kUninformative;
}

/// Information dates t_0 < ... < t_{N-1} and the expert variances at those dates.
struct ExpertSchedule {
    std::vector<double> dates;
    std::vector<double> variances;

    [[nodiscard]] std::size_t size() const noexcept { return dates.size(); }
    [[nodiscard]] bool empty() const noexcept { return dates.empty(); }

    /// Throws std::invalid_argument unless lengths match, dates strictly increase
    /// inside [0, horizon) and every variance is >= 0 (or uninformative).
    void validate(double horizon) const;

    /// t_k = k * horizon / count with a constant variance; count = 0 gives no dates.
    [[nodiscard]] static ExpertSchedule equidistant(std::size_t count, double horizon, double variance);

    bool operator==(const ExpertSchedule&) const = default;
};

struct FilterState {
    double mu_hat = 0.0;
    double gamma = 0.0;
    double time = 0.0;
};

/// Constants of the Riccati equation d/dt gamma = -gamma^2/sigma^2 - 2 alpha gamma + beta^2.
struct RiccatiConstants {
    double c0;      ///< sigma sqrt(sigma^2 alpha^2 + beta^2)
    double limit;   ///< c0 - alpha sigma^2, the attracting fixed point
    double rate;    ///< 2 c0 / sigma^2
    double sigma2;  ///< sigma^2

    explicit RiccatiConstants(const ModelParams& params);
};

/// Conditional variance under return observations only, started at nu0.
[[nodiscard]] double gamma_R_closed(const ModelParams& params, double t);

/// Riccati solution started at gamma_start after a time dt (no updates in between).
[[nodiscard]] double gamma_C_segment(double gamma_start, const ModelParams& params, double dt);

/// Linear relaxation of the expert-only variance towards beta^2 / (2 alpha).
[[nodiscard]] double gamma_E_segment(double gamma_start, const ModelParams& params, double dt);

/// Expert-only filter between information dates: exact relaxation of mean and variance.
[[nodiscard]] FilterState propagate_E(const FilterState& state, const ModelParams& params, double dt);

/// Posterior variance gamma_minus * Gamma / (gamma_minus + Gamma).
///
/// Gamma = 0 gives 0, an uninformative Gamma returns gamma_minus. When both
/// gamma_minus and Gamma are 0 the weight on the prior is taken to be 1.
[[nodiscard]] double bayes_variance(double gamma_minus, double gamma_expert);

/// Weight lambda = Gamma / (gamma_minus + Gamma) on the prior mean.
[[nodiscard]] double bayes_weight(double gamma_minus, double gamma_expert);

/// Gaussian update of the filter with the view z of an expert with variance gamma_expert.
[[nodiscard]] FilterState bayes_update(const FilterState& state_minus, double z, double gamma_expert);

/// One explicit Euler step of the Kalman filter mean driven by the return increment dR.
/// The variance is advanced by the closed-form Riccati segment.
[[nodiscard]] FilterState kalman_mean_step(const FilterState& state, const ModelParams& params,
                                           double dR, double dt);

/// Variance rule applied at information dates; swappable for fault injection.
using VarianceUpdate = double (*)(double gamma_minus, double gamma_expert);

/// Deterministic conditional variance t -> gamma_t^H for one regime.
///
/// The curve is right-continuous: at an information date at() is the post-update
/// value and left_limit() the pre-update value.
class VarianceCurve {
public:
    VarianceCurve(Regime regime, const ModelParams& params, const ExpertSchedule& schedule = {},
                  VarianceUpdate update = &bayes_variance);

    [[nodiscard]] double at(double t) const;
    [[nodiscard]] double left_limit(double t) const;

    [[nodiscard]] Regime regime() const noexcept { return regime_; }
    [[nodiscard]] const ModelParams& params() const noexcept { return params_; }

    /// Information dates that actually affect this regime (empty for R and F).
    [[nodiscard]] std::span<const double> dates() const noexcept { return dates_; }
    [[nodiscard]] std::span<const double> pre_update() const noexcept { return pre_; }
    [[nodiscard]] std::span<const double> post_update() const noexcept { return post_; }

    /// Value reached from gamma_start after dt without updates.
    [[nodiscard]] double evolve(double gamma_start, double dt) const;

private:
    Regime regime_;
    ModelParams params_;
    std::vector<double> dates_;
    std::vector<double> pre_;
    std::vector<double> post_;
};

struct TrajectoryPoint {
    double time = 0.0;
    double gamma_minus = 0.0;
    double gamma = 0.0;
    double mu_hat_minus = 0.0;
    double mu_hat = 0.0;
    bool is_information_date = false;
};

/// Filter output on a time grid. At information dates the *_minus fields hold the
/// left limits and the plain fields the post-update values; elsewhere they coincide.
struct FilterTrajectory {
    Regime regime = Regime::R;
    bool has_mean = false;
    std::vector<TrajectoryPoint> points;
};

/// Deterministic variance on the grid, with the information dates merged in.
/// Throws std::invalid_argument for grid points outside [0, T].
[[nodiscard]] FilterTrajectory gamma_trajectory(Regime regime, const ModelParams& params,
                                                const ExpertSchedule& schedule,
                                                std::span<const double> grid);

/// Observed data for one path on a grid 0 = s_0 < ... < s_M = T.
struct Observations {
    std::vector<double> grid;
    std::vector<double> return_increments;  ///< R(s_{i+1}) - R(s_i); size M (R and C)
    std::vector<double> drift;              ///< mu(s_i); size M + 1 (F only)
    std::vector<double> expert_views;       ///< Z_k, aligned with the schedule (E and C)
};

/// Pathwise filter. Every information date must lie on the observation grid.
/// Throws std::invalid_argument on mismatched lengths.
[[nodiscard]] FilterTrajectory run_filter(Regime regime, const ModelParams& params,
                                          const ExpertSchedule& schedule, const Observations& obs);

/// CSV with header time,regime,gamma_minus,gamma,mu_hat_minus,mu_hat,is_information_date.
void write_trajectory_csv(std::ostream& out, std::span<const FilterTrajectory> trajectories);

}  // namespace driftinfo
