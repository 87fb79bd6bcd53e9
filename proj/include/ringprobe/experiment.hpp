#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ringprobe/covariance.hpp"
#include "ringprobe/probe.hpp"
#include "ringprobe/rng.hpp"
#include "ringprobe/scenario.hpp"

namespace ringprobe {

// The environment variant a scenario's derived parameters describe.
EnvironmentModel environment_from_params(const DimensionlessParams& params);

// One simulated pulse: draw the probe phase u = kx from the Gaussian
// marginal (variance eps*x2), then a count with conditional mean
// R N sin^2(2u) and conditional variance R^2 N sin^4(2u) (R^2 N^2 variance
// terms arise from the phase spread), rounded to a nonnegative integer.
// Marginal mean and variance converge to the analytic N_o and its variance.
// The poisson variance model swaps the conditional law for Poisson(mean).
long sample_count(const CovarianceState& state, double eps, double useful, double n_in,
                  CounterRng& rng, VarianceModel model = VarianceModel::coherent);

struct TimeseriesPoint {
    double t_p = 0.0;
    double theta = 0.0;
    double empirical_mean = 0.0;
    double empirical_var = 0.0;  // unbiased sample variance over repeats
    double analytic_mean = 0.0;
    double analytic_var = 0.0;
};

struct SignalCurve {
    std::vector<TimeseriesPoint> points;
    std::uint64_t seed = 0;
    int n_repeats = 0;
    EnvironmentKind env_kind = EnvironmentKind::pure_decoherence;
};

// Repeated fresh-preparation protocol: every grid point restarts from the
// initial thermal state, runs to theta_p, fires one pulse, and the counts of
// n_repeats such runs are averaged. Streams are keyed by (seed, grid index,
// repeat index), so serial and parallel execution are bit-identical.
SignalCurve generate_timeseries(const DimensionlessParams& params, const EnvironmentModel& env,
                                std::span<const double> theta_grid, int n_repeats,
                                std::uint64_t seed,
                                VarianceModel model = VarianceModel::coherent,
                                Execution exec = Execution::parallel);

enum class Verdict { decoherence_like, thermalization_like, inconclusive };

std::string verdict_name(Verdict v);

struct SpectrumReport {
    std::vector<double> frequency;  // angular, units of the trap frequency
    std::vector<double> power;
    int peak_bin = 0;
    double peak_power = 0.0;
    double floor_median = 0.0;
    double floor_mean = 0.0;   // median / ln 2, the exponential-noise mean
    double threshold = 0.0;    // floor_median * (1 + 3/ln 2): "3 sd above floor"
    double empirical_snr = 0.0;
    bool detected = false;
    Verdict verdict = Verdict::thermalization_like;
};

// Moving-average detrend over one breathing period (pi in theta; edges
// trimmed), then a plain discrete-Fourier periodogram P_k = |F_k|^2 / n.
// Power is read at the bin nearest angular frequency 2. Detection demands
// that bin to sit 3 noise standard deviations above the median floor and to
// dominate every other bin at frequencies >= 1. The empirical S/N is
// sqrt((peak - floor_mean)/(2 floor_mean)): a sinusoid of amplitude a in
// white noise of sd sigma gives (a/sigma) sqrt(n/8).
// Requires >= 64 points spanning >= 4 breathing periods on a uniform grid.
SpectrumReport detrend_and_periodogram(const SignalCurve& curve);

struct Budget {
    int n_repeats = 1;
    std::vector<double> theta_grid;
};

struct DiscriminationResult {
    Verdict verdict = Verdict::inconclusive;
    double empirical_snr = 0.0;
    double predicted_snr = 0.0;  // spectral S/N for this span and budget
    double snr_ratio = 0.0;      // empirical / predicted
    SpectrumReport spectrum;
    SignalCurve curve;
};

// End-to-end classification: simulate, take the periodogram, and compare
// the outcome against the budgeted sensitivity. A missing 2-Omega line is
// called thermalization-like only when the budget predicts a detectable
// line (predicted S/N >= 3); otherwise the run is inconclusive.
DiscriminationResult discriminate(const DimensionlessParams& params,
                                  const EnvironmentModel& truth, const Budget& budget);

}  // namespace ringprobe
