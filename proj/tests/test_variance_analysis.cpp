#include <doctest.h>

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "driftinfo/variance_analysis.hpp"

using namespace driftinfo;

namespace {

ModelParams long_run() { return long_run_market(); }

// Long-run pre-update level found by bracketing the fixed point of one
// relax-then-update cycle, using the raw quotient form of the Riccati flow.
double bracketed_upper(Regime regime, const ModelParams& p, double spacing, double gamma_expert) {
    const double s2 = p.sigma * p.sigma;
    const double c0 = p.sigma * std::sqrt(s2 * p.alpha * p.alpha + p.beta * p.beta);
    const auto relax = [&](double g) {
        if (regime == Regime::E) {
            const double v = p.beta * p.beta / (2.0 * p.alpha);
            return v + std::exp(-2.0 * p.alpha * spacing) * (g - v);
        }
        const double c1 = g + p.alpha * s2 + c0;
        const double c2 = g + p.alpha * s2 - c0;
        const double e = std::exp(-2.0 * c0 * spacing / s2);
        return -p.alpha * s2 + c0 * (c1 + c2 * e) / (c1 - c2 * e);
    };
    const auto residual = [&](double u) { return relax(gamma_expert * u / (gamma_expert + u)) - u; };
    std::uintmax_t iterations = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(residual, 1e-300, 10.0,
                                                            boost::math::tools::eps_tolerance<double>(52),
                                                            iterations);
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("long-run variance with returns only") {
    CHECK(gamma_limit_R(default_market()) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(gamma_limit_R(long_run()) == doctest::Approx(0.111605).epsilon(1e-5));
    ModelParams flat = default_market();
    flat.beta = 0.0;
    CHECK(gamma_limit_R(flat) == 0.0);
}

TEST_CASE("envelope structure") {
    const ModelParams p = long_run();
    for (Regime r : {Regime::E, Regime::C}) {
        for (double spacing : {0.01, 0.05, 0.3, 1.0}) {
            for (double g : {0.01, 0.25, 1.0, 4.0}) {
                const auto env = envelope(r, p, spacing, g);
                CHECK(env.d > 0.0);
                CHECK(env.d < 1.0);
                CHECK(env.a > 0.0);
                CHECK(env.c < 0.0);
                CHECK(env.lower >= 0.0);
                CHECK(env.lower <= env.upper);
                CHECK(env.lower == doctest::Approx(g * env.upper / (g + env.upper)).epsilon(1e-15));
                CHECK(env.a * env.upper * env.upper + env.b * env.upper + env.c ==
                      doctest::Approx(0.0).scale(std::abs(env.c)).epsilon(1e-12));
                CHECK(env.upper <= monotone_threshold(r, p) + 1e-15);
            }
        }
    }
    CHECK(envelope(Regime::E, p, 0.05, 1.0).d == doctest::Approx(std::exp(-0.2)).epsilon(1e-15));
}

TEST_CASE("envelope matches independent fixed-point computations") {
    const ModelParams p = long_run();
    for (Regime r : {Regime::E, Regime::C}) {
        for (double spacing : {0.02, 0.05, 0.2}) {
            for (double g : {0.05, 1.0}) {
                const auto env = envelope(r, p, spacing, g);
                const auto it = envelope_oracle(r, p, spacing, g);
                CHECK(std::abs(env.upper - it.upper) < 1e-10);
                CHECK(std::abs(env.lower - it.lower) < 1e-10);
                CHECK(env.upper == doctest::Approx(bracketed_upper(r, p, spacing, g)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("oracle fixed point relations") {
    const ModelParams p = long_run();
    const auto e = envelope_oracle(Regime::E, p, 0.05, 1.0);
    CHECK(gamma_E_segment(e.lower, p, 0.05) == doctest::Approx(e.upper).epsilon(1e-12));
    CHECK(e.lower == doctest::Approx(e.upper / (1.0 + e.upper)).epsilon(1e-12));
    const auto c = envelope_oracle(Regime::C, p, 0.05, 1.0);
    CHECK(gamma_C_segment(c.lower, p, 0.05) == doctest::Approx(c.upper).epsilon(1e-12));

    const auto silent = envelope_oracle(Regime::E, p, 0.05, 1e12);
    CHECK(silent.upper == doctest::Approx(p.stationary_variance()).epsilon(1e-9));
    CHECK(silent.lower == doctest::Approx(p.stationary_variance()).epsilon(1e-9));
}

TEST_CASE("envelope limits in the spacing") {
    const ModelParams p = long_run();
    for (Regime r : {Regime::E, Regime::C}) {
        // U shrinks like sqrt(spacing): beta sqrt(Gamma spacing / a0) with a0 the limit of a.
        const double a0 = r == Regime::E ? 1.0 : RiccatiConstants(p).c0 / (p.alpha * p.sigma * p.sigma);
        for (double spacing : {1e-8, 1e-10, 1e-14}) {
            const auto tiny = envelope(r, p, spacing, 1.0);
            CHECK(tiny.upper == doctest::Approx(p.beta * std::sqrt(spacing / a0)).epsilon(1e-3));
            CHECK(tiny.lower <= tiny.upper);
        }
        CHECK(envelope(r, p, 1e-14, 1.0).upper <= 1e-6);
        double last_u = 0.0;
        double last_l = 0.0;
        for (double spacing = 0.01; spacing < 2.0; spacing *= 1.3) {
            const auto env = envelope(r, p, spacing, 0.5);
            CHECK(env.upper > last_u);
            CHECK(env.lower > last_l);
            last_u = env.upper;
            last_l = env.lower;
        }
    }
}

TEST_CASE("envelope input checks") {
    const ModelParams p = long_run();
    CHECK_THROWS_AS((void)envelope(Regime::R, p, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)envelope(Regime::E, p, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)envelope(Regime::C, p, 0.1, kUninformative), std::invalid_argument);
    CHECK_THROWS_AS((void)envelope(Regime::C, p, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("monotone thresholds") {
    const ModelParams p = default_market();
    CHECK(monotone_threshold(Regime::C, p) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(monotone_threshold(Regime::R, p) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(monotone_threshold(Regime::E, p) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)monotone_threshold(Regime::F, p), std::invalid_argument);
    const double k = monotone_threshold(Regime::C, p);
    CHECK(gamma_C_segment(k, p, 0.7) == doctest::Approx(k).epsilon(1e-14));
}

TEST_CASE("sawtooth stays inside the envelope after the transient") {
    ModelParams p = long_run();
    p.horizon = 50.0;
    const double spacing = 0.05;
    const auto sched = ExpertSchedule::equidistant(1000, p.horizon, 1.0);
    for (Regime r : {Regime::E, Regime::C}) {
        const VarianceCurve curve(r, p, sched);
        const auto env = envelope(r, p, spacing, 1.0);
        const std::size_t start = transient_index(curve);
        REQUIRE(start < curve.dates().size());
        for (std::size_t k = start; k < curve.dates().size(); ++k) {
            CHECK(curve.pre_update()[k] <= env.upper + 1e-9);
            CHECK(curve.post_update()[k] >= env.lower - 1e-9);
            const double mid = curve.dates()[k] + 0.5 * spacing;
            CHECK(curve.at(mid) <= env.upper + 1e-9);
            CHECK(curve.at(mid) >= env.lower - 1e-9);
        }
    }
}

TEST_CASE("convergence in the number of experts") {
    const ModelParams p = default_market();
    std::vector<std::size_t> counts;
    for (std::size_t n = 10; n <= 10240; n *= 2) counts.push_back(n);
    const auto study = convergence_study(p, 0.25, p.horizon, counts);
    for (std::size_t i = 1; i < study.size(); ++i) {
        CHECK(study[i].gamma_E < study[i - 1].gamma_E);
        CHECK(study[i].gamma_C < study[i - 1].gamma_C);
    }
    CHECK(study.back().gamma_E < 0.01);
    CHECK(study.back().gamma_C < 0.01);

    const auto silent = convergence_study(p, kUninformative, p.horizon, counts);
    for (const auto& pt : silent) {
        CHECK(pt.gamma_E == doctest::Approx(gamma_E_segment(p.nu0, p, p.horizon)).epsilon(1e-14));
        CHECK(pt.gamma_C == doctest::Approx(gamma_R_closed(p, p.horizon)).epsilon(1e-14));
    }

    const std::vector<std::size_t> one{1};
    const auto single = convergence_study(p, 0.25, 0.6, one);
    CHECK(single[0].gamma_E == doctest::Approx(gamma_E_segment(bayes_variance(p.nu0, 0.25), p, 0.6)).epsilon(1e-14));
    CHECK_THROWS_AS((void)convergence_study(p, 0.25, 0.0, one), std::invalid_argument);
}

TEST_CASE("envelope CSV") {
    const std::vector<AsymptoticEnvelope> envs{envelope(Regime::E, long_run(), 0.05, 1.0)};
    std::ostringstream out;
    write_envelope_csv(out, envs);
    CHECK(out.str().rfind("regime,delta_spacing,gamma_expert,U,L\nE,0.05,1,", 0) == 0);
}
