#pragma once

namespace driftinfo {

/// Parameters of the Ornstein-Uhlenbeck drift and the stock it drives.
///
/// The drift follows dmu = alpha (delta - mu) dt + beta dB with
/// mu_0 ~ Normal(m0, nu0); returns follow dR = mu dt + sigma dW.
/// Times are plain year fractions.
struct ModelParams {
    double alpha = 3.0;    ///< mean-reversion speed
    double beta = 1.0;     ///< drift volatility; 0 only for the constant-drift case
    double delta = 0.05;   ///< mean-reversion level
    double sigma = 0.25;   ///< stock volatility
    double m0 = 0.05;      ///< mean of mu_0
    double nu0 = 1.0 / 6;  ///< variance of mu_0
    double horizon = 1.0;  ///< investment horizon T

    /// beta^2 / (2 alpha), the long-run variance of the drift.
    [[nodiscard]] double stationary_variance() const noexcept { return beta * beta / (2.0 * alpha); }

    /// Throws std::invalid_argument if any invariant is violated.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

/// Reference market (alpha = 3, beta = 1, delta = 0.05, sigma = 0.25, T = 1) with a
/// stationary start.
[[nodiscard]] ModelParams default_market();

/// The market used for the long-run conditional variance plot
/// (alpha = 2, beta = 1, sigma = 0.15), stationary start.
[[nodiscard]] ModelParams long_run_market();

/// Same market, with m0 = delta and nu0 = beta^2 / (2 alpha).
[[nodiscard]] ModelParams with_stationary_start(ModelParams params);

/// Same market, with a known initial drift: m0 = delta, nu0 = 0.
[[nodiscard]] ModelParams with_known_start(ModelParams params);

[[nodiscard]] double drift_mean(const ModelParams& params, double t);
[[nodiscard]] double drift_variance(const ModelParams& params, double t);
[[nodiscard]] double drift_covariance(const ModelParams& params, double s, double t);

/// E[mu_t^2] = nu_t + m_t^2.
[[nodiscard]] double drift_second_moment(const ModelParams& params, double t);

}  // namespace driftinfo
