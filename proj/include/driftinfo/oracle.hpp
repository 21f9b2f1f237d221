#pragma once

#include <span>
#include <vector>

#include "driftinfo/market_model.hpp"

namespace driftinfo::oracle {

/// Integrates d/dt gamma = -gamma^2 / sigma^2 - 2 alpha gamma + beta^2 from
/// gamma(0) = gamma_start with an adaptive Dormand-Prince stepper and returns
/// gamma at each (increasing) time in `times`.
[[nodiscard]] std::vector<double> riccati_ode(const ModelParams& params, double gamma_start,
                                              std::span<const double> times, double tolerance = 1e-13);

}  // namespace driftinfo::oracle
