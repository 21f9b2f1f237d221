#include "driftinfo/oracle.hpp"

#include <boost/numeric/odeint.hpp>
#include <stdexcept>

namespace driftinfo::oracle {

std::vector<double> riccati_ode(const ModelParams& params, double gamma_start, std::span<const double> times,
                                double tolerance) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 1>;

    const double inv_sigma2 = 1.0 / (params.sigma * params.sigma);
    const double two_alpha = 2.0 * params.alpha;
    const double beta2 = params.beta * params.beta;
    auto rhs = [&](const State& g, State& dg, double /*t*/) {
        dg[0] = -inv_sigma2 * g[0] * g[0] - two_alpha * g[0] + beta2;
    };

    std::vector<double> out;
    out.reserve(times.size());
    State state{gamma_start};
    double t = 0.0;
    auto stepper = odeint::make_controlled(tolerance, tolerance, odeint::runge_kutta_dopri5<State>());
    for (double target : times) {
        if (target < t) throw std::invalid_argument("riccati_ode: times must be increasing from 0");
        if (target > t) {
            odeint::integrate_adaptive(stepper, rhs, state, t, target, (target - t) / 16.0);
            t = target;
        }
        out.push_back(state[0]);
    }
    return out;
}

}  // namespace driftinfo::oracle
