#include "ringprobe/probe.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringprobe/gaussian.hpp"

namespace ringprobe {

InteractionFractions interaction_fractions(double g, double kappa) {
    if (!(kappa > 0.0) || g < 0.0) throw std::invalid_argument("need kappa > 0 and g >= 0");
    const double g2 = g * g;
    const double k2 = kappa * kappa;
    const double denom = (g2 + k2) * (g2 + k2);
    return {g2 * k2 / denom, k2 * k2 / denom};
}

double odd_mode_envelope(double g, double kappa, double t) {
    const double damp = std::exp(-kappa * t);
    return (g - damp * (g * std::cos(g * t) + kappa * std::sin(g * t))) / (g * g + kappa * kappa);
}

double integrated_envelope_rate(double g, double kappa, double tau) {
    if (!(kappa * tau > 0.0)) throw std::invalid_argument("need kappa*tau > 0");
    const long panels = std::max(10000L, std::lround(std::ceil(20.0 * kappa * tau)));
    const double h = tau / static_cast<double>(panels);
    double acc = 0.0;
    for (long i = 0; i <= panels; ++i) {
        const double f = odd_mode_envelope(g, kappa, h * static_cast<double>(i));
        const double w = (i == 0 || i == panels) ? 0.5 : 1.0;
        acc += w * f * f;
    }
    return kappa * kappa / tau * acc * h;
}

MeanCounts mean_counts(double useful, double bypass, double n_in, double sin2) {
    return {useful * n_in * sin2, bypass * n_in + useful * n_in * (1.0 - sin2)};
}

double counts_variance(double useful, double n_in, double sin2, double sin4,
                       VarianceModel model) {
    double var = 0.0;
    if (model == VarianceModel::coherent) {
        var = useful * useful * (n_in * (n_in + 1.0) * sin4 - n_in * n_in * sin2 * sin2);
    } else {
        var = useful * n_in * sin2 +
              useful * useful * n_in * n_in * (sin4 - sin2 * sin2);
    }
    if (var < 0.0) throw std::runtime_error("negative count variance (inconsistent moments)");
    return var;
}

double counts_variance_lamb_dicke(double useful, double n_in, double eps, double x2) {
    const double v = 4.0 * eps * x2;
    return useful * useful * v * v * (2.0 * n_in * n_in + 3.0 * n_in);
}

double counts_variance_saturated(double useful, double n_in) {
    return useful * useful * (n_in * n_in / 8.0 + 3.0 * n_in / 8.0);
}

double oscillation_amplitude(double n_in, double useful, double eps, double gamma) {
    return 8.0 * n_in * useful * eps * gamma;
}

double contrast(double gamma, double nbar0, double theta_p) {
    return 2.0 * gamma / (nbar0 + gamma * theta_p);
}

SinglePointSnr snr_single(double contrast_value, double n_in) {
    if (!(n_in >= 1.0)) throw std::invalid_argument("need N_in >= 1");
    SinglePointSnr out;
    out.snr = contrast_value / std::sqrt(2.0 + 3.0 / n_in);
    out.n_required = out.snr > 0.0 ? 10.0 / (out.snr * out.snr)
                                   : std::numeric_limits<double>::infinity();
    return out;
}

SpectralSnr snr_spectral(double gamma, double nbar0, double omega_tau, double n_in,
                         std::optional<double> span_theta) {
    if (!(gamma > 0.0) || !(nbar0 >= 1.0) || !(omega_tau > 0.0)) {
        throw std::invalid_argument("snr_spectral needs positive gamma, omega_tau and nbar0 >= 1");
    }
    SpectralSnr out;
    out.t_opt_theta = nbar0 / gamma;
    const double span = span_theta.value_or(out.t_opt_theta);
    out.snr_at_span =
        std::sqrt(span / omega_tau) * snr_single(contrast(gamma, nbar0, 0.5 * span), n_in).snr;
    out.max_snr = std::sqrt(gamma / (nbar0 * omega_tau));
    out.n_total = 10.0 * nbar0 * nbar0 / (gamma * gamma);
    return out;
}

MassiveLimits massive_limits(double gamma, double nbar0, double omega_tau) {
    MassiveLimits out;
    out.low_occupation_warning = nbar0 < 5.0;
    const double x = std::atanh(1.0 / nbar0);  // hbar Omega / 2 kB T0
    out.max_snr = std::sqrt(gamma * x / omega_tau);
    out.t_opt_theta = 1.0 / (gamma * x);
    out.n_total = 10.0 / (gamma * x * gamma * x);
    return out;
}

std::string regime_name(Regime regime) {
    switch (regime) {
        case Regime::lamb_dicke: return "lamb-dicke";
        case Regime::intermediate: return "intermediate";
        case Regime::anti_lamb_dicke: return "anti-lamb-dicke";
    }
    return "unknown";
}

Regime classify_regime(double eps, double x2) {
    const double u = 8.0 * eps * x2;
    if (u <= 0.2) return Regime::lamb_dicke;
    if (u >= 5.0) return Regime::anti_lamb_dicke;
    return Regime::intermediate;
}

std::vector<CurvePoint> analytic_signal_curve(const DimensionlessParams& params,
                                              const EnvironmentModel& env,
                                              std::span<const double> theta_grid,
                                              VarianceModel model, Execution exec) {
    const auto fractions = interaction_fractions(params.coupling_g, params.kappa);
    const CovarianceState initial = thermal_initial_state(params.nbar0);
    std::vector<CurvePoint> out(theta_grid.size());
    const long n = static_cast<long>(theta_grid.size());

#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (long i = 0; i < n; ++i) {
        const double theta = theta_grid[static_cast<size_t>(i)];
        const CovarianceState s = evolve_covariances(initial, env, theta);
        const double sin2 = expect_sin2(s.x2, params.lamb_dicke);
        const double sin4 = expect_sin4(s.x2, params.lamb_dicke);
        const MeanCounts counts = mean_counts(fractions.useful, fractions.bypass,
                                              params.photons_in, sin2);
        CurvePoint& p = out[static_cast<size_t>(i)];
        p.t_p = theta / params.omega;
        p.theta = theta;
        p.mean_odd = counts.odd;
        p.var_odd = counts_variance(fractions.useful, params.photons_in, sin2, sin4, model);
        p.mean_even = counts.even;
        p.regime = classify_regime(params.lamb_dicke, s.x2);
    }
    return out;
}

}  // namespace ringprobe
