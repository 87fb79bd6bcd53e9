#include "ringprobe/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace ringprobe {

CovarianceState thermal_initial_state(double nbar0) {
    if (!(nbar0 >= 1.0)) {
        throw std::invalid_argument("thermal occupation must be >= 1");
    }
    return {0.0, nbar0, nbar0, 0.0};
}

CovarianceState evolve_covariances(const CovarianceState& initial, const EnvironmentModel& env,
                                   double theta) {
    if (initial.theta != 0.0 || initial.xp != 0.0 || initial.x2 != initial.p2) {
        throw std::invalid_argument(
            "closed forms require an equipartition initial state at theta = 0");
    }
    if (!(initial.x2 > 0.0) || theta < 0.0) {
        throw std::invalid_argument("invalid initial state or negative time");
    }
    CovarianceState s;
    s.theta = theta;
    if (const auto* dec = std::get_if<PureDecoherence>(&env)) {
        const double g = dec->gamma;
        s.x2 = initial.x2 + g * (2.0 * theta - std::sin(2.0 * theta));
        s.p2 = initial.p2 + g * (2.0 * theta + std::sin(2.0 * theta));
        s.xp = g * (1.0 - std::cos(2.0 * theta));
    } else {
        const auto& th = std::get<Thermalization>(env);
        const double decay = std::exp(-2.0 * th.gamma_th * theta);
        s.x2 = th.nbar_env + (initial.x2 - th.nbar_env) * decay;
        s.p2 = th.nbar_env + (initial.p2 - th.nbar_env) * decay;
        s.xp = 0.0;
    }
    return s;
}

std::array<double, 3> covariance_rhs(const CovarianceState& state, const EnvironmentModel& env) {
    if (const auto* dec = std::get_if<PureDecoherence>(&env)) {
        return {2.0 * state.xp, -2.0 * state.xp + 4.0 * dec->gamma, state.p2 - state.x2};
    }
    const auto& th = std::get<Thermalization>(env);
    return {2.0 * state.xp - 2.0 * th.gamma_th * (state.x2 - th.nbar_env),
            -2.0 * state.xp - 2.0 * th.gamma_th * (state.p2 - th.nbar_env),
            (state.p2 - state.x2) - 2.0 * th.gamma_th * state.xp};
}

namespace {

CovarianceState rk4_step(const CovarianceState& s, const EnvironmentModel& env, double h) {
    auto shift = [](const CovarianceState& base, const std::array<double, 3>& k, double f) {
        return CovarianceState{base.theta, base.x2 + f * k[0], base.p2 + f * k[1],
                               base.xp + f * k[2]};
    };
    const auto k1 = covariance_rhs(s, env);
    const auto k2 = covariance_rhs(shift(s, k1, 0.5 * h), env);
    const auto k3 = covariance_rhs(shift(s, k2, 0.5 * h), env);
    const auto k4 = covariance_rhs(shift(s, k3, h), env);
    CovarianceState out;
    out.theta = s.theta + h;
    out.x2 = s.x2 + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    out.p2 = s.p2 + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    out.xp = s.xp + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
    return out;
}

}  // namespace

std::vector<CovarianceState> integrate_covariances(const CovarianceState& initial,
                                                   const EnvironmentModel& env,
                                                   std::span<const double> theta_grid) {
    std::vector<CovarianceState> out;
    out.reserve(theta_grid.size() + 1);
    if (theta_grid.empty()) {
        out.push_back(initial);
        return out;
    }
    double prev = initial.theta;
    for (double t : theta_grid) {
        if (t < prev) throw std::invalid_argument("theta grid must be increasing from the initial time");
        prev = t;
    }
    constexpr double k_max_step = 0.002;
    CovarianceState s = initial;
    for (double target : theta_grid) {
        const double span = target - s.theta;
        if (span > 0.0) {
            const long n = std::max(1L, std::lround(std::ceil(span / k_max_step)));
            const double h = span / static_cast<double>(n);
            for (long i = 0; i < n; ++i) s = rk4_step(s, env, h);
            s.theta = target;  // avoid drift from repeated addition
        }
        if (!(s.x2 > 0.0) || !(s.p2 > 0.0) || s.uncertainty_product() < 1.0 - 1e-9) {
            throw std::runtime_error("covariance integration violated state invariants");
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace ringprobe
