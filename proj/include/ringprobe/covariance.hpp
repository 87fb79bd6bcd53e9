#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

namespace ringprobe {

// Second moments of the oscillator in reduced units: x2 = <x^2>/sigma0^2,
// p2 = <p^2>/(m hbar Omega / 2), xp = <xp+px>/hbar, at dimensionless time
// theta = Omega t. Uncertainty reads x2*p2 - xp^2 >= 1.
struct CovarianceState {
    double theta = 0.0;
    double x2 = 1.0;
    double p2 = 1.0;
    double xp = 0.0;

    double uncertainty_product() const { return x2 * p2 - xp * xp; }
};

struct PureDecoherence {
    double gamma = 0.0;  // Gamma/Omega
};

struct Thermalization {
    double gamma_th = 0.0;  // Gamma_th/Omega
    double nbar_env = 1.0;  // bath occupation factor coth(hbar Omega/2 kB T_e)
};

using EnvironmentModel = std::variant<PureDecoherence, Thermalization>;

// Equipartition thermal state: x2 = p2 = nbar0, xp = 0 at theta = 0.
CovarianceState thermal_initial_state(double nbar0);

// Closed-form evolution from an equipartition initial state (x2 == p2,
// xp == 0, theta == 0). Throws std::invalid_argument otherwise.
//
// Pure decoherence:   x2 = x2_0 + gamma (2 theta - sin 2 theta)
//                     p2 = p2_0 + gamma (2 theta + sin 2 theta)
//                     xp = gamma (1 - cos 2 theta)
// Thermalization:     x2 = nbar_e + (x2_0 - nbar_e) exp(-2 gamma_th theta)
//                     p2 likewise, xp = 0.
// The additive form x2_0 + nbar_e (1 - exp(-2 gamma_th theta)) is sometimes
// quoted for the thermalizing case; it is not stationary at x2_0 = nbar_e.
// The relaxation form used here is the one the number-basis integrator in
// the fock module reproduces.
CovarianceState evolve_covariances(const CovarianceState& initial, const EnvironmentModel& env,
                                   double theta);

// Moment equations in reduced units (general states):
//   pure decoherence:  dx2 = 2 xp,  dp2 = -2 xp + 4 gamma,  dxp = p2 - x2
//   thermalization:    dx2 = 2 xp - 2 gamma_th (x2 - nbar_e)
//                      dp2 = -2 xp - 2 gamma_th (p2 - nbar_e)
//                      dxp = (p2 - x2) - 2 gamma_th xp
std::array<double, 3> covariance_rhs(const CovarianceState& state, const EnvironmentModel& env);

// Fixed-step RK4 along theta_grid (strictly increasing, starting at or after
// initial.theta). Output state i corresponds to theta_grid[i]; an empty grid
// returns just the initial state. Used as the numerical cross-check of the
// closed forms; accepts non-equipartition initial states.
std::vector<CovarianceState> integrate_covariances(const CovarianceState& initial,
                                                   const EnvironmentModel& env,
                                                   std::span<const double> theta_grid);

}  // namespace ringprobe
