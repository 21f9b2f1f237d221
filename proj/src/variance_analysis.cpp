#include "driftinfo/variance_analysis.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "driftinfo/csv.hpp"

namespace driftinfo {

namespace {

void require_envelope_inputs(Regime regime, double spacing, double gamma_expert) {
    if (regime != Regime::E && regime != Regime::C) {
        throw std::invalid_argument("envelope is defined for regimes E and C only");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw std::invalid_argument("spacing must be > 0");
    if (!(gamma_expert > 0.0) || !std::isfinite(gamma_expert)) {
        throw std::invalid_argument("expert variance must be positive and finite");
    }
}

}  // namespace

double gamma_limit_R(const ModelParams& params) { return RiccatiConstants(params).limit; }

AsymptoticEnvelope envelope(Regime regime, const ModelParams& params, double spacing, double gamma_expert) {
    params.validate();
    require_envelope_inputs(regime, spacing, gamma_expert);
    const RiccatiConstants rc(params);
    const double s2 = params.stationary_variance();
    const double alpha_sigma2 = params.alpha * rc.sigma2;

    AsymptoticEnvelope env;
    env.regime = regime;
    env.spacing = spacing;
    env.gamma_expert = gamma_expert;
    const double exponent = regime == Regime::E ? 2.0 * params.alpha * spacing : rc.rate * spacing;
    env.d = std::exp(-exponent);
    const double one_minus_d = -std::expm1(-exponent);
    env.a = regime == Regime::E
                ? 1.0
                : (one_minus_d * (gamma_expert + alpha_sigma2) + (1.0 + env.d) * rc.c0) / (2.0 * alpha_sigma2);
    env.b = -one_minus_d * (s2 - gamma_expert);
    env.c = -one_minus_d * s2 * gamma_expert;

    const double disc = env.b * env.b - 4.0 * env.a * env.c;
    assert(disc >= 0.0);
    const double root = std::sqrt(disc);
    // Positive root without cancellation: (-b + root) / 2a == 2c / (-b - root).
    if (env.c == 0.0) {
        env.upper = std::max(0.0, -env.b / env.a);
    } else if (env.b <= 0.0) {
        env.upper = (-env.b + root) / (2.0 * env.a);
    } else {
        env.upper = 2.0 * env.c / (-env.b - root);
    }
    env.lower = gamma_expert * env.upper / (gamma_expert + env.upper);
    return env;
}

EnvelopeBounds envelope_oracle(Regime regime, const ModelParams& params, double spacing, double gamma_expert,
                               double tolerance, std::size_t max_iterations) {
    params.validate();
    if (regime != Regime::E && regime != Regime::C) {
        throw std::invalid_argument("envelope is defined for regimes E and C only");
    }
    if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
    const auto relax = [&](double g) {
        return regime == Regime::E ? gamma_E_segment(g, params, spacing) : gamma_C_segment(g, params, spacing);
    };

    double pre = params.stationary_variance();
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        const double post = bayes_variance(pre, gamma_expert);
        const double next = relax(post);
        if (std::abs(next - pre) < tolerance) {
            return {next, bayes_variance(next, gamma_expert), it};
        }
        pre = next;
    }
    throw std::runtime_error("envelope fixed-point iteration did not converge");
}

double monotone_threshold(Regime regime, const ModelParams& params) {
    switch (regime) {
        case Regime::R:
        case Regime::C: return gamma_limit_R(params);
        case Regime::E: return params.stationary_variance();
        case Regime::F: break;
    }
    throw std::invalid_argument("monotone threshold is defined for regimes R, E and C");
}

std::size_t transient_index(const VarianceCurve& curve, double tolerance) {
    const auto pre = curve.pre_update();
    for (std::size_t k = 0; k + 1 < pre.size(); ++k) {
        if (std::abs(pre[k + 1] - pre[k]) < tolerance) return k;
    }
    return pre.size();
}

std::vector<ConvergencePoint> convergence_study(const ModelParams& params, double gamma_expert_bound,
                                                double t_eval, std::span<const std::size_t> counts) {
    if (!(t_eval > 0.0 && t_eval <= params.horizon)) throw std::invalid_argument("t_eval must lie in (0, T]");
    std::vector<ConvergencePoint> out;
    out.reserve(counts.size());
    for (std::size_t n : counts) {
        const auto schedule = ExpertSchedule::equidistant(n, params.horizon, gamma_expert_bound);
        ConvergencePoint p;
        p.count = n;
        p.gamma_E = VarianceCurve(Regime::E, params, schedule).at(t_eval);
        p.gamma_C = VarianceCurve(Regime::C, params, schedule).at(t_eval);
        out.push_back(p);
    }
    return out;
}

void write_envelope_csv(std::ostream& out, std::span<const AsymptoticEnvelope> envelopes) {
    CsvWriter csv(out);
    csv.row({"regime", "delta_spacing", "gamma_expert", "U", "L"});
    for (const auto& e : envelopes) {
        csv.row({std::string(1, regime_tag(e.regime)), format_number(e.spacing), format_number(e.gamma_expert),
                 format_number(e.upper), format_number(e.lower)});
    }
}

}  // namespace driftinfo
