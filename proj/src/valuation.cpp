#include "driftinfo/valuation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "driftinfo/csv.hpp"

namespace driftinfo {

namespace {

// Integral of the expert-only relaxation started at g over a segment of length len.
double relaxation_integral(const ModelParams& params, double g, double len) {
    const double s2 = params.stationary_variance();
    const double weight = -std::expm1(-2.0 * params.alpha * len) / (2.0 * params.alpha);
    return s2 * len - weight * (s2 - g);
}

// Integral of the Riccati solution started at g: limit * len + sigma^2 log((C1 - C2 e) / (2 c0)).
double riccati_integral(const RiccatiConstants& rc, double g, double len) {
    const double one_minus_e = -std::expm1(-rc.rate * len);
    return rc.limit * len + rc.sigma2 * std::log1p((g - rc.limit) * one_minus_e / (2.0 * rc.c0));
}

template <typename Integral, typename Evolve>
double piecewise_sum(const ModelParams& params, const ExpertSchedule& schedule, Integral integral,
                     Evolve evolve) {
    params.validate();
    schedule.validate(params.horizon);
    double total = 0.0;
    double gamma = params.nu0;
    double last = 0.0;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const double len = schedule.dates[k] - last;
        if (len > 0.0) {
            total += integral(gamma, len);
            gamma = evolve(gamma, len);
        }
        gamma = bayes_variance(gamma, schedule.variances[k]);
        last = schedule.dates[k];
    }
    return total + integral(gamma, params.horizon - last);
}

}  // namespace

double A_term(const ModelParams& params) {
    params.validate();
    const double s2 = params.stationary_variance();
    const double T = params.horizon;
    const double a = params.alpha;
    const double gap = params.m0 - params.delta;
    return (params.delta * params.delta + s2) * T + 2.0 * params.delta * gap * (-std::expm1(-a * T)) / a +
           (gap * gap + params.nu0 - s2) * (-std::expm1(-2.0 * a * T)) / (2.0 * a);
}

double B_R(const ModelParams& params) {
    params.validate();
    return riccati_integral(RiccatiConstants(params), params.nu0, params.horizon);
}

double B_E(const ModelParams& params, const ExpertSchedule& schedule) {
    return piecewise_sum(
        params, schedule, [&](double g, double len) { return relaxation_integral(params, g, len); },
        [&](double g, double len) { return gamma_E_segment(g, params, len); });
}

double B_C(const ModelParams& params, const ExpertSchedule& schedule) {
    const RiccatiConstants rc(params);
    return piecewise_sum(
        params, schedule, [&](double g, double len) { return riccati_integral(rc, g, len); },
        [&](double g, double len) { return gamma_C_segment(g, params, len); });
}

double B_closed(Regime regime, const ModelParams& params, const ExpertSchedule& schedule) {
    switch (regime) {
        case Regime::R: return B_R(params);
        case Regime::E: return B_E(params, schedule);
        case Regime::C: return B_C(params, schedule);
        case Regime::F: return 0.0;
    }
    return 0.0;
}

double B_oracle(Regime regime, const ModelParams& params, const ExpertSchedule& schedule) {
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
    const VarianceCurve curve(regime, params, schedule);
    if (regime == Regime::F) return 0.0;

    const auto integrate = [&](double start_gamma, double a, double b) {
        if (!(b > a)) return 0.0;
        auto f = [&](double t) { return curve.evolve(start_gamma, t - a); };
        return Quadrature::integrate(f, a, b, 15, 1e-13);
    };

    const auto dates = curve.dates();
    const auto post = curve.post_update();
    if (dates.empty()) return integrate(params.nu0, 0.0, params.horizon);
    double total = integrate(params.nu0, 0.0, dates.front());
    for (std::size_t k = 0; k < dates.size(); ++k) {
        const double end = k + 1 < dates.size() ? dates[k + 1] : params.horizon;
        total += integrate(post[k], dates[k], end);
    }
    return total;
}

double value(Regime regime, double x0, const ModelParams& params, const ExpertSchedule& schedule) {
    if (!(x0 > 0.0)) throw std::invalid_argument("initial capital must be > 0");
    return std::log(x0) + (A_term(params) - B_closed(regime, params, schedule)) / (2.0 * params.sigma * params.sigma);
}

Efficiency efficiency(Regime regime, const ModelParams& params, const ExpertSchedule& schedule) {
    const double scaled = B_closed(regime, params, schedule) / (2.0 * params.sigma * params.sigma);
    return {std::exp(scaled), std::exp(-scaled)};
}

double optimal_strategy(double mu_hat, const ModelParams& params) { return mu_hat / (params.sigma * params.sigma); }

ValueReport value_report(double x0, const ModelParams& params, const ExpertSchedule& schedule) {
    if (!(x0 > 0.0)) throw std::invalid_argument("initial capital must be > 0");
    ValueReport report;
    report.x0 = x0;
    report.A = A_term(params);
    const double two_sigma2 = 2.0 * params.sigma * params.sigma;
    for (Regime r : kAllRegimes) {
        const auto i = regime_index(r);
        report.B[i] = B_closed(r, params, schedule);
        report.V[i] = std::log(x0) + (report.A - report.B[i]) / two_sigma2;
        report.required_capital[i] = std::exp(report.B[i] / two_sigma2);
        report.efficiency[i] = std::exp(-report.B[i] / two_sigma2);
    }
    return report;
}

void write_value_report_csv(std::ostream& out, const ValueReport& report) {
    CsvWriter csv(out);
    csv.row({"regime", "A", "B", "V", "x0_required", "efficiency_percent"});
    for (Regime r : kAllRegimes) {
        const auto i = regime_index(r);
        csv.row({std::string(1, regime_tag(r)), format_number(report.A), format_number(report.B[i]),
                 format_number(report.V[i]), format_number(report.required_capital[i]),
                 format_fixed(100.0 * report.efficiency[i], 2)});
    }
}

}  // namespace driftinfo
