#include "driftinfo/market_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace driftinfo {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw std::invalid_argument(std::string("invalid model parameters: ") + what);
    }
}

void require_time(double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("time must be nonnegative");
    }
}

}  // namespace

void ModelParams::validate() const {
    require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
    require(std::isfinite(beta) && beta >= 0.0, "beta must be >= 0");
    require(std::isfinite(delta), "delta must be finite");
    require(std::isfinite(sigma) && sigma > 0.0, "sigma must be > 0");
    require(std::isfinite(m0), "m0 must be finite");
    require(std::isfinite(nu0) && nu0 >= 0.0, "nu0 must be >= 0");
    require(std::isfinite(horizon) && horizon > 0.0, "horizon must be > 0");
}

ModelParams default_market() { return ModelParams{}; }

ModelParams long_run_market() {
    ModelParams p;
    p.alpha = 2.0;
    p.beta = 1.0;
    p.sigma = 0.15;
    return with_stationary_start(p);
}

ModelParams with_stationary_start(ModelParams params) {
    params.m0 = params.delta;
    params.nu0 = params.stationary_variance();
    return params;
}

ModelParams with_known_start(ModelParams params) {
    params.m0 = params.delta;
    params.nu0 = 0.0;
    return params;
}

double drift_mean(const ModelParams& params, double t) {
    require_time(t);
    return params.delta + std::exp(-params.alpha * t) * (params.m0 - params.delta);
}

double drift_variance(const ModelParams& params, double t) {
    require_time(t);
    const double s2 = params.stationary_variance();
    return s2 + std::exp(-2.0 * params.alpha * t) * (params.nu0 - s2);
}

double drift_covariance(const ModelParams& params, double s, double t) {
    require_time(s);
    require_time(t);
    const double s2 = params.stationary_variance();
    return s2 * std::exp(-params.alpha * std::abs(t - s)) +
           std::exp(-params.alpha * (t + s)) * (params.nu0 - s2);
}

double drift_second_moment(const ModelParams& params, double t) {
    const double m = drift_mean(params, t);
    return drift_variance(params, t) + m * m;
}

}  // namespace driftinfo
