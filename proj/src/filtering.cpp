#include "driftinfo/filtering.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "driftinfo/csv.hpp"

namespace driftinfo {

namespace {

bool uses_dates(Regime r) { return r == Regime::E || r == Regime::C; }

void require_nonnegative(double dt, const char* what) {
    if (!(dt >= 0.0)) throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

// Tolerance for deciding that a time coincides with a grid point.
double time_tolerance(double horizon) { return 1e-9 * std::max(1.0, horizon); }

}  // namespace

void ExpertSchedule::validate(double horizon) const {
    if (dates.size() != variances.size()) {
        throw std::invalid_argument("expert schedule: " + std::to_string(dates.size()) + " dates but " +
                                    std::to_string(variances.size()) + " variances");
    }
    for (std::size_t k = 0; k < dates.size(); ++k) {
        if (!(dates[k] >= 0.0 && dates[k] < horizon)) {
            throw std::invalid_argument("expert schedule: date " + format_exact(dates[k]) +
                                        " outside [0, " + format_exact(horizon) + ")");
        }
        if (k > 0 && !(dates[k] > dates[k - 1])) {
            throw std::invalid_argument("expert schedule: dates must be strictly increasing");
        }
        if (!(variances[k] >= 0.0)) {
            throw std::invalid_argument("expert schedule: variance must be >= 0 or uninformative");
        }
    }
}

ExpertSchedule ExpertSchedule::equidistant(std::size_t count, double horizon, double variance) {
    ExpertSchedule s;
    s.dates.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        s.dates.push_back(static_cast<double>(k) * horizon / static_cast<double>(count));
    }
    s.variances.assign(count, variance);
    return s;
}

RiccatiConstants::RiccatiConstants(const ModelParams& params)
    : c0(params.sigma * std::sqrt(params.sigma * params.sigma * params.alpha * params.alpha +
                                  params.beta * params.beta)),
      // c0 - alpha sigma^2 rewritten without cancellation
      limit(params.sigma * params.sigma * params.beta * params.beta /
            (c0 + params.alpha * params.sigma * params.sigma)),
      rate(2.0 * c0 / (params.sigma * params.sigma)),
      sigma2(params.sigma * params.sigma) {}

double gamma_C_segment(double gamma_start, const ModelParams& params, double dt) {
    require_nonnegative(gamma_start, "gamma_start");
    require_nonnegative(dt, "dt");
    const RiccatiConstants rc(params);
    // gamma = limit + (g - limit) e / (1 + (g - limit)(1 - e) / (2 c0)), e = exp(-rate dt),
    // algebraically identical to the C1/C2 quotient form.
    const double gap = gamma_start - rc.limit;
    const double e = std::exp(-rc.rate * dt);
    const double one_minus_e = -std::expm1(-rc.rate * dt);
    const double denom = 1.0 + gap * one_minus_e / (2.0 * rc.c0);
    assert(denom > 0.0);
    return std::max(0.0, rc.limit + gap * e / denom);
}

double gamma_R_closed(const ModelParams& params, double t) { return gamma_C_segment(params.nu0, params, t); }

double gamma_E_segment(double gamma_start, const ModelParams& params, double dt) {
    require_nonnegative(gamma_start, "gamma_start");
    require_nonnegative(dt, "dt");
    const double s2 = params.stationary_variance();
    return s2 + std::exp(-2.0 * params.alpha * dt) * (gamma_start - s2);
}

FilterState propagate_E(const FilterState& state, const ModelParams& params, double dt) {
    require_nonnegative(dt, "dt");
    FilterState next;
    next.mu_hat = params.delta + std::exp(-params.alpha * dt) * (state.mu_hat - params.delta);
    next.gamma = gamma_E_segment(state.gamma, params, dt);
    next.time = state.time + dt;
    return next;
}

double bayes_weight(double gamma_minus, double gamma_expert) {
    if (!(gamma_expert >= 0.0)) throw std::invalid_argument("expert variance must be >= 0");
    if (is_uninformative(gamma_expert)) return 1.0;
    if (gamma_minus == 0.0) return 1.0;  // covers 0/0: the state is already exact
    return gamma_expert / (gamma_minus + gamma_expert);
}

double bayes_variance(double gamma_minus, double gamma_expert) {
    if (!(gamma_expert >= 0.0)) throw std::invalid_argument("expert variance must be >= 0");
    if (is_uninformative(gamma_expert)) return gamma_minus;
    if (gamma_expert == 0.0 || gamma_minus == 0.0) return 0.0;
    return gamma_minus * gamma_expert / (gamma_minus + gamma_expert);
}

FilterState bayes_update(const FilterState& state_minus, double z, double gamma_expert) {
    const double lambda = bayes_weight(state_minus.gamma, gamma_expert);
    FilterState post = state_minus;
    if (lambda != 1.0) post.mu_hat = lambda * state_minus.mu_hat + (1.0 - lambda) * z;
    post.gamma = bayes_variance(state_minus.gamma, gamma_expert);
    return post;
}

FilterState kalman_mean_step(const FilterState& state, const ModelParams& params, double dR, double dt) {
    const double gain = state.gamma / (params.sigma * params.sigma);
    FilterState next;
    next.mu_hat = state.mu_hat +
                  (params.alpha * params.delta - (params.alpha + gain) * state.mu_hat) * dt + gain * dR;
    next.gamma = gamma_C_segment(state.gamma, params, dt);
    next.time = state.time + dt;
    return next;
}

VarianceCurve::VarianceCurve(Regime regime, const ModelParams& params, const ExpertSchedule& schedule,
                             VarianceUpdate update)
    : regime_(regime), params_(params) {
    params_.validate();
    if (!uses_dates(regime_)) return;
    schedule.validate(params_.horizon);
    dates_ = schedule.dates;
    pre_.reserve(dates_.size());
    post_.reserve(dates_.size());
    double gamma = params_.nu0;
    double last = 0.0;
    for (std::size_t k = 0; k < dates_.size(); ++k) {
        const double minus = evolve(gamma, dates_[k] - last);
        gamma = update(minus, schedule.variances[k]);
        pre_.push_back(minus);
        post_.push_back(gamma);
        last = dates_[k];
    }
}

double VarianceCurve::evolve(double gamma_start, double dt) const {
    switch (regime_) {
        case Regime::R:
        case Regime::C: return gamma_C_segment(gamma_start, params_, dt);
        case Regime::E: return gamma_E_segment(gamma_start, params_, dt);
        case Regime::F: return 0.0;
    }
    return 0.0;
}

double VarianceCurve::at(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
    if (regime_ == Regime::F) return 0.0;
    const auto it = std::upper_bound(dates_.begin(), dates_.end(), t);
    if (it == dates_.begin()) return evolve(params_.nu0, t);
    const auto k = static_cast<std::size_t>(it - dates_.begin()) - 1;
    return evolve(post_[k], t - dates_[k]);
}

double VarianceCurve::left_limit(double t) const {
    const auto it = std::lower_bound(dates_.begin(), dates_.end(), t);
    if (it != dates_.end() && *it == t) return pre_[static_cast<std::size_t>(it - dates_.begin())];
    return at(t);
}

FilterTrajectory gamma_trajectory(Regime regime, const ModelParams& params, const ExpertSchedule& schedule,
                                  std::span<const double> grid) {
    const VarianceCurve curve(regime, params, schedule);
    const double tol = time_tolerance(params.horizon);

    std::vector<double> times;
    times.reserve(grid.size() + curve.dates().size());
    for (double t : grid) {
        if (!(t >= 0.0 && t <= params.horizon + tol)) {
            throw std::invalid_argument("grid point " + format_exact(t) + " outside [0, T]");
        }
        times.push_back(std::min(t, params.horizon));
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    // Snap grid points onto nearby dates, then insert missing dates.
    const auto dates = curve.dates();
    for (double d : dates) {
        auto it = std::lower_bound(times.begin(), times.end(), d - tol);
        if (it != times.end() && std::abs(*it - d) <= tol) {
            *it = d;
        } else {
            times.insert(it, d);
        }
    }

    FilterTrajectory out;
    out.regime = regime;
    out.points.reserve(times.size());
    for (double t : times) {
        TrajectoryPoint p;
        p.time = t;
        p.is_information_date = std::binary_search(dates.begin(), dates.end(), t);
        p.gamma_minus = curve.left_limit(t);
        p.gamma = curve.at(t);
        out.points.push_back(p);
    }
    return out;
}

FilterTrajectory run_filter(Regime regime, const ModelParams& params, const ExpertSchedule& schedule,
                            const Observations& obs) {
    const VarianceCurve curve(regime, params, schedule);
    const auto& grid = obs.grid;
    const double tol = time_tolerance(params.horizon);
    if (grid.size() < 2) throw std::invalid_argument("observation grid needs at least two points");
    if (std::abs(grid.front()) > tol || std::abs(grid.back() - params.horizon) > tol) {
        throw std::invalid_argument("observation grid must cover [0, T]");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("observation grid must be increasing");
    }
    const std::size_t steps = grid.size() - 1;
    if ((regime == Regime::R || regime == Regime::C) && obs.return_increments.size() != steps) {
        throw std::invalid_argument("expected " + std::to_string(steps) + " return increments, got " +
                                    std::to_string(obs.return_increments.size()));
    }
    if (regime == Regime::F && obs.drift.size() != grid.size()) {
        throw std::invalid_argument("full-information filter needs the drift at every grid point");
    }

    // Grid index -> schedule index for the dates this regime uses.
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> date_at(grid.size(), kNone);
    if (uses_dates(regime)) {
        if (obs.expert_views.size() != schedule.size()) {
            throw std::invalid_argument("expected " + std::to_string(schedule.size()) + " expert views, got " +
                                        std::to_string(obs.expert_views.size()));
        }
        for (std::size_t k = 0; k < schedule.size(); ++k) {
            const double d = schedule.dates[k];
            auto it = std::lower_bound(grid.begin(), grid.end(), d - tol);
            if (it == grid.end() || std::abs(*it - d) > tol) {
                throw std::invalid_argument("information date " + format_exact(d) + " is not on the grid");
            }
            date_at[static_cast<std::size_t>(it - grid.begin())] = k;
        }
    }

    FilterTrajectory out;
    out.regime = regime;
    out.has_mean = true;
    out.points.reserve(grid.size());

    FilterState state{params.m0, params.nu0, 0.0};
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = grid[i];
        TrajectoryPoint p;
        p.time = t;
        p.gamma_minus = curve.left_limit(t);
        p.gamma = curve.at(t);
        if (regime == Regime::F) state.mu_hat = obs.drift[i];
        p.mu_hat_minus = state.mu_hat;
        if (date_at[i] != kNone) {
            const std::size_t k = date_at[i];
            state.gamma = p.gamma_minus;
            state = bayes_update(state, obs.expert_views[k], schedule.variances[k]);
            p.is_information_date = true;
        }
        p.mu_hat = state.mu_hat;
        out.points.push_back(p);

        if (i == steps) break;
        const double dt = grid[i + 1] - t;
        state.gamma = p.gamma;
        state.time = t;
        switch (regime) {
            case Regime::R:
            case Regime::C: state = kalman_mean_step(state, params, obs.return_increments[i], dt); break;
            case Regime::E: state = propagate_E(state, params, dt); break;
            case Regime::F: break;
        }
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, std::span<const FilterTrajectory> trajectories) {
    CsvWriter csv(out);
    csv.row({"time", "regime", "gamma_minus", "gamma", "mu_hat_minus", "mu_hat", "is_information_date"});
    for (const auto& traj : trajectories) {
        const std::string tag(1, regime_tag(traj.regime));
        for (const auto& p : traj.points) {
            const std::string mu_minus = traj.has_mean ? format_number(p.mu_hat_minus) : "";
            const std::string mu = traj.has_mean ? format_number(p.mu_hat) : "";
            csv.row({format_number(p.time), tag, format_number(p.gamma_minus), format_number(p.gamma), mu_minus,
                     mu, p.is_information_date ? "1" : "0"});
        }
    }
}

}  // namespace driftinfo
