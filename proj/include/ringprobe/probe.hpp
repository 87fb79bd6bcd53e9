#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringprobe/covariance.hpp"
#include "ringprobe/scenario.hpp"

namespace ringprobe {

enum class Execution { serial, parallel };

// Count-variance model. `coherent` is the operator-moment result for a
// coherent probe pulse (super-Poissonian, the default); `poisson` is a
// conditional-Poisson detection alternative whose shot term is R N <sin^2>.
enum class VarianceModel { coherent, poisson };

struct InteractionFractions {
    double useful = 0.0;  // R = g^2 k^2 / (g^2 + k^2)^2, photon interacts
    double bypass = 0.0;  // Rbar = k^4 / (g^2 + k^2)^2, photon never couples
};

InteractionFractions interaction_fractions(double g, double kappa);

// Odd-mode transient under a mesa drive switched on at t = 0:
// f(t) = (g - g e^{-kt} cos gt - k e^{-kt} sin gt)/(g^2 + k^2); the factor
// multiplying -i sin(2kx) eta in the odd-mode amplitude.
double odd_mode_envelope(double g, double kappa, double t);

// (kappa^2 / tau) * integral of f(t)^2 over the pulse: the finite-pulse
// interaction fraction. Converges to R in the bad-cavity limit kappa*tau >> 1.
double integrated_envelope_rate(double g, double kappa, double tau);

struct MeanCounts {
    double odd = 0.0;
    double even = 0.0;
};

// N_o = R N_in <sin^2>, N_e = Rbar N_in + R N_in (1 - <sin^2>).
MeanCounts mean_counts(double useful, double bypass, double n_in, double sin2);

double counts_variance(double useful, double n_in, double sin2, double sin4,
                       VarianceModel model = VarianceModel::coherent);
// Printed limit forms: long-wavelength and phase-saturated.
double counts_variance_lamb_dicke(double useful, double n_in, double eps, double x2);
double counts_variance_saturated(double useful, double n_in);

// Peak-to-peak breathing amplitude in the long-wavelength limit:
// 8 N_in R eps gamma. Independent of the initial state and the delay time.
double oscillation_amplitude(double n_in, double useful, double eps, double gamma);

// C_osc(theta_p) = 2 gamma / (nbar0 + gamma theta_p).
double contrast(double gamma, double nbar0, double theta_p);

struct SinglePointSnr {
    double snr = 0.0;        // C_osc / sqrt(2 + 3/N_in)
    double n_required = 0.0; // 10 / snr^2 repetitions for a 3-sigma antinode
};

SinglePointSnr snr_single(double contrast_value, double n_in);

struct SpectralSnr {
    double snr_at_span = 0.0;   // S/N(2 Omega) for one series over the span
    double t_opt_theta = 0.0;   // nbar0 / gamma, optimum span in theta
    double max_snr = 0.0;       // sqrt(gamma / (nbar0 Omega tau))
    double n_total = 0.0;       // 10 nbar0^2 / gamma^2 total measurements
};

// Spectral signal-to-noise chain for the 2*Omega breathing line. `span_theta`
// defaults to the optimum t_opt_theta. The quoted max_snr is attained by the
// implemented S/N(span) at span = 2 * t_opt_theta; at t_opt_theta itself the
// curve sits at about 94% of the maximum.
SpectralSnr snr_spectral(double gamma, double nbar0, double omega_tau, double n_in,
                         std::optional<double> span_theta = {});

struct MassiveLimits {
    double max_snr = 0.0;
    double t_opt_theta = 0.0;
    double n_total = 0.0;
    bool low_occupation_warning = false;  // nbar0 < 5, expansion unreliable
};

// High-temperature expansion of the spectral chain, x = artanh(1/nbar0):
// max S/N = sqrt(gamma x / (Omega tau)), T_opt = 1/(gamma x), n = 10/(gamma x)^2.
MassiveLimits massive_limits(double gamma, double nbar0, double omega_tau);

enum class Regime { lamb_dicke, intermediate, anti_lamb_dicke };

std::string regime_name(Regime regime);
Regime classify_regime(double eps, double x2);

struct CurvePoint {
    double t_p = 0.0;      // s
    double theta = 0.0;
    double mean_odd = 0.0;
    double var_odd = 0.0;
    double mean_even = 0.0;
    Regime regime = Regime::lamb_dicke;
};

// Mean and variance of the odd count along the probe grid, from the exact
// exponential expectations (never the long-wavelength expansion, so the
// saturation at R N_in / 2 comes out right).
std::vector<CurvePoint> analytic_signal_curve(const DimensionlessParams& params,
                                              const EnvironmentModel& env,
                                              std::span<const double> theta_grid,
                                              VarianceModel model = VarianceModel::coherent,
                                              Execution exec = Execution::parallel);

}  // namespace ringprobe
