#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "driftinfo/valuation.hpp"

using namespace driftinfo;

namespace {

ModelParams table_market() { return with_stationary_start(default_market()); }

ExpertSchedule experts(std::size_t n) { return ExpertSchedule::equidistant(n, 1.0, 0.25); }

ModelParams merton_market() {
    ModelParams p;
    p.beta = 0.0;
    p.nu0 = 0.0;
    p.m0 = p.delta = 0.05;
    return p;
}

}  // namespace

TEST_CASE("second-moment integral") {
    CHECK(A_term(table_market()) == doctest::Approx(0.169167).epsilon(1e-5));
    CHECK(A_term(table_market()) == doctest::Approx(0.0025 + 1.0 / 6.0).epsilon(1e-14));
    CHECK(A_term(merton_market()) == doctest::Approx(0.0025).epsilon(1e-15));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
        ModelParams p;
        p.alpha = u(rng);
        p.beta = u(rng);
        p.m0 = u(rng) - 1.5;
        p.nu0 = u(rng);
        p.horizon = u(rng);
        const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double t) { return drift_second_moment(p, t); }, 0.0, p.horizon, 15, 1e-14);
        CHECK(A_term(p) == doctest::Approx(q).epsilon(1e-12));
    }
}

TEST_CASE("variance integrals") {
    const ModelParams p = table_market();
    CHECK(B_R(p) == doctest::Approx(0.12903).epsilon(0.0002 / 0.12903));
    CHECK(B_R(merton_market()) == 0.0);
    CHECK(B_closed(Regime::F, p, experts(10)) == 0.0);
    CHECK(B_oracle(Regime::F, p, experts(10)) == 0.0);
    CHECK(B_C(p, {}) == B_R(p));

    ExpertSchedule silent = experts(10);
    silent.variances.assign(10, kUninformative);
    CHECK(B_E(p, silent) == doctest::Approx(B_E(p, {})).epsilon(1e-14));
    CHECK(B_C(p, silent) == doctest::Approx(B_R(p)).epsilon(1e-14));
    CHECK(std::abs(B_E(p, {}) - B_oracle(Regime::E, p, {})) < 1e-10);

    for (Regime r : {Regime::R, Regime::E, Regime::C}) {
        CHECK(std::abs(B_closed(r, p, experts(10)) - B_oracle(r, p, experts(10))) < 1e-8);
    }
}

TEST_CASE("variance integrals with a late first date") {
    const ModelParams p = table_market();
    ExpertSchedule s;
    s.dates = {0.3, 0.35, 0.8};
    s.variances = {0.1, kUninformative, 0.0};
    for (Regime r : {Regime::E, Regime::C}) {
        CHECK(std::abs(B_closed(r, p, s) - B_oracle(r, p, s)) < 1e-9);
    }
}

TEST_CASE("reference values") {
    const ModelParams p = table_market();
    CHECK(value(Regime::F, 1.0, p, {}) == doctest::Approx(1.3533).epsilon(0.0001 / 1.3533));
    CHECK(std::abs(value(Regime::R, 1.0, p, {}) - 0.3213) <= 0.0005);
    CHECK(std::abs(value(Regime::E, 1.0, p, experts(10)) - 0.5208) <= 0.0005);
    CHECK(std::abs(value(Regime::C, 1.0, p, experts(10)) - 0.6008) <= 0.0005);
    CHECK(std::abs(value(Regime::C, 1.0, p, experts(100)) - 1.0017) <= 0.0005);
    CHECK(std::abs(100.0 * efficiency(Regime::R, p, {}).efficiency - 35.63) <= 0.05);
    CHECK(std::abs(100.0 * efficiency(Regime::C, p, experts(1000)).efficiency - 88.39) <= 0.05);
}

TEST_CASE("constant drift") {
    const ModelParams p = merton_market();
    for (Regime r : kAllRegimes) {
        for (double x0 : {0.5, 1.0, 3.0}) {
            CHECK(value(r, x0, p, experts(10)) == doctest::Approx(std::log(x0) + 0.02).epsilon(1e-15));
        }
    }
    CHECK(optimal_strategy(0.05, p) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(optimal_strategy(0.0, p) == 0.0);
}

TEST_CASE("efficiency and required capital") {
    const ModelParams p = table_market();
    const Efficiency f = efficiency(Regime::F, p, experts(10));
    CHECK(f.efficiency == 1.0);
    CHECK(f.required_capital == 1.0);
    const Efficiency c = efficiency(Regime::C, p, experts(10));
    CHECK(c.required_capital * c.efficiency == doctest::Approx(1.0).epsilon(1e-15));
    // The required capital closes the gap to the fully informed investor.
    CHECK(value(Regime::C, c.required_capital, p, experts(10)) ==
          doctest::Approx(value(Regime::F, 1.0, p, experts(10))).epsilon(1e-14));
    CHECK_THROWS_AS((void)value(Regime::R, 0.0, p, {}), std::invalid_argument);
}

TEST_CASE("value ordering over random configurations") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        ModelParams p;
        p.alpha = 0.3 + 4.0 * u(rng);
        p.beta = 0.1 + 1.5 * u(rng);
        p.sigma = 0.05 + 0.5 * u(rng);
        p.nu0 = 0.5 * u(rng);
        const auto n = static_cast<std::size_t>(1 + 50 * u(rng));
        const auto s = ExpertSchedule::equidistant(n, p.horizon, 2.0 * u(rng));
        const ValueReport rep = value_report(1.0, p, s);
        const auto V = [&](Regime r) { return rep.V[regime_index(r)]; };
        CHECK(V(Regime::C) >= V(Regime::E) - 1e-12);
        CHECK(V(Regime::C) >= V(Regime::R) - 1e-12);
        CHECK(V(Regime::F) >= V(Regime::C) - 1e-12);
        for (Regime r : kAllRegimes) {
            CHECK(rep.efficiency[regime_index(r)] > 0.0);
            CHECK(rep.efficiency[regime_index(r)] <= 1.0);
        }

        const auto known = with_known_start(with_stationary_start(p));
        CHECK(efficiency(Regime::C, known, s).efficiency >=
              efficiency(Regime::C, with_stationary_start(p), s).efficiency);
    }
}

TEST_CASE("value report CSV") {
    std::ostringstream out;
    write_value_report_csv(out, value_report(1.0, table_market(), experts(10)));
    const std::string text = out.str();
    CHECK(text.rfind("regime,A,B,V,x0_required,efficiency_percent\n", 0) == 0);
    CHECK(text.find("\nF,") != std::string::npos);
    CHECK(text.find(",100.00\n") != std::string::npos);
}
