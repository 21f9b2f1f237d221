#pragma once

#include <iosfwd>

#include "driftinfo/filtering.hpp"
#include "driftinfo/market_model.hpp"
#include "driftinfo/regime.hpp"

namespace driftinfo {

/// Optimal expected log-utility and the information efficiency of every regime.
///
/// V = log x0 + (A - B) / (2 sigma^2), where A integrates E[mu_t^2] and B the
/// conditional variance over [0, T]. The efficiency exp(-B / (2 sigma^2)) is the
/// reciprocal of the capital a regime needs to match the fully informed investor
/// started with unit wealth.
struct ValueReport {
    double x0 = 1.0;
    double A = 0.0;
    PerRegime<double> B{};
    PerRegime<double> V{};
    PerRegime<double> required_capital{};
    PerRegime<double> efficiency{};
};

/// Integral of E[mu_t^2] over [0, T] in closed form.
[[nodiscard]] double A_term(const ModelParams& params);

/// Integrals of the conditional variance over [0, T] in closed form. Information
/// dates need not be equidistant; a first date t_0 > 0 adds the segment [0, t_0)
/// started at nu0, and the last segment ends at T.
[[nodiscard]] double B_R(const ModelParams& params);
[[nodiscard]] double B_E(const ModelParams& params, const ExpertSchedule& schedule);
[[nodiscard]] double B_C(const ModelParams& params, const ExpertSchedule& schedule);

/// Dispatches to the closed form for `regime`; 0 for F.
[[nodiscard]] double B_closed(Regime regime, const ModelParams& params, const ExpertSchedule& schedule);

/// Adaptive Gauss-Kronrod quadrature of the variance curve, piecewise between dates.
[[nodiscard]] double B_oracle(Regime regime, const ModelParams& params, const ExpertSchedule& schedule);

/// Throws std::invalid_argument if x0 <= 0.
[[nodiscard]] double value(Regime regime, double x0, const ModelParams& params, const ExpertSchedule& schedule);

struct Efficiency {
    double required_capital = 1.0;
    double efficiency = 1.0;
};

[[nodiscard]] Efficiency efficiency(Regime regime, const ModelParams& params, const ExpertSchedule& schedule);

/// Log-optimal fraction of wealth in the stock given the drift estimate.
[[nodiscard]] double optimal_strategy(double mu_hat, const ModelParams& params);

[[nodiscard]] ValueReport value_report(double x0, const ModelParams& params, const ExpertSchedule& schedule);

/// CSV with header regime,A,B,V,x0_required,efficiency_percent.
void write_value_report_csv(std::ostream& out, const ValueReport& report);

}  // namespace driftinfo
