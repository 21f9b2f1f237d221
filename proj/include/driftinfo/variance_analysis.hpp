#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "driftinfo/filtering.hpp"
#include "driftinfo/market_model.hpp"
#include "driftinfo/regime.hpp"

namespace driftinfo {

/// Long-run band of the sawtooth variance for experts arriving every `spacing`
/// years with constant variance `gamma_expert`.
///
/// `upper` is the limit of the pre-update values and the positive root of
/// a U^2 + b U + c = 0; `lower` = Gamma U / (Gamma + U) is the limit of the
/// post-update values.
struct AsymptoticEnvelope {
    Regime regime = Regime::E;
    double spacing = 0.0;
    double gamma_expert = 0.0;
    double d = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double upper = 0.0;
    double lower = 0.0;
};

/// lim gamma_t^R = c0 - alpha sigma^2.
[[nodiscard]] double gamma_limit_R(const ModelParams& params);

/// Closed-form envelope; regime must be E or C, spacing > 0 and 0 < gamma_expert < inf.
[[nodiscard]] AsymptoticEnvelope envelope(Regime regime, const ModelParams& params, double spacing,
                                          double gamma_expert);

struct EnvelopeBounds {
    double upper = 0.0;
    double lower = 0.0;
    std::size_t iterations = 0;
};

/// Fixed point of "relax for `spacing`, then update" obtained by plain iteration
/// of the filter recursions, started from the stationary variance. Throws
/// std::runtime_error if the change does not drop below `tolerance` within
/// `max_iterations`.
[[nodiscard]] EnvelopeBounds envelope_oracle(Regime regime, const ModelParams& params, double spacing,
                                             double gamma_expert, double tolerance = 1e-14,
                                             std::size_t max_iterations = 1'000'000);

/// Level separating decreasing from increasing variance between dates:
/// c0 - alpha sigma^2 for R and C, beta^2 / (2 alpha) for E.
[[nodiscard]] double monotone_threshold(Regime regime, const ModelParams& params);

/// First information date after which the pre-update values of `curve` move by
/// less than `tolerance` per date. Returns dates().size() if that never happens.
[[nodiscard]] std::size_t transient_index(const VarianceCurve& curve, double tolerance = 1e-10);

struct ConvergencePoint {
    std::size_t count = 0;
    double gamma_E = 0.0;
    double gamma_C = 0.0;
};

/// Variance at t_eval for equidistant dates t_k = k T / N, constant variance
/// `gamma_expert_bound`, for every N in `counts`.
[[nodiscard]] std::vector<ConvergencePoint> convergence_study(const ModelParams& params,
                                                              double gamma_expert_bound, double t_eval,
                                                              std::span<const std::size_t> counts);

/// CSV with header regime,delta_spacing,gamma_expert,U,L.
void write_envelope_csv(std::ostream& out, std::span<const AsymptoticEnvelope> envelopes);

}  // namespace driftinfo
