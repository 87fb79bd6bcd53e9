#include "ringprobe/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ringprobe/constants.hpp"
#include "ringprobe/gaussian.hpp"

namespace ringprobe {

EnvironmentModel environment_from_params(const DimensionlessParams& params) {
    if (params.env_kind == EnvironmentKind::pure_decoherence) {
        return PureDecoherence{params.gamma};
    }
    return Thermalization{params.gamma_th, params.nbar_env};
}

namespace {

long poisson_draw(double mean, CounterRng& rng) {
    // Knuth for small means, normal approximation for bright signals.
    if (mean <= 0.0) return 0;
    if (mean < 50.0) {
        const double limit = std::exp(-mean);
        long k = 0;
        double prod = rng.next_uniform();
        while (prod > limit) {
            ++k;
            prod *= rng.next_uniform();
        }
        return k;
    }
    const double draw = mean + std::sqrt(mean) * rng.next_normal();
    return std::max(0L, std::lround(draw));
}

}  // namespace

long sample_count(const CovarianceState& state, double eps, double useful, double n_in,
                  CounterRng& rng, VarianceModel model) {
    if (n_in <= 0.0) return 0;
    const double phase_sd = std::sqrt(eps * state.x2);
    const double u = phase_sd * rng.next_normal();
    const double s = std::sin(2.0 * u);
    const double sin2 = s * s;
    const double mean = useful * n_in * sin2;
    if (model == VarianceModel::poisson) {
        return poisson_draw(mean, rng);
    }
    const double sd = useful * std::sqrt(n_in) * sin2;
    const double draw = mean + sd * rng.next_normal();
    return std::max(0L, std::lround(draw));
}

SignalCurve generate_timeseries(const DimensionlessParams& params, const EnvironmentModel& env,
                                std::span<const double> theta_grid, int n_repeats,
                                std::uint64_t seed, VarianceModel model, Execution exec) {
    if (n_repeats < 1) throw std::invalid_argument("need at least one repeat per grid point");
    for (size_t i = 1; i < theta_grid.size(); ++i) {
        if (theta_grid[i] - theta_grid[i - 1] < params.omega_tau * (1.0 - 1e-9)) {
            throw std::invalid_argument("grid spacing below one pulse length");
        }
    }
    const auto fractions = interaction_fractions(params.coupling_g, params.kappa);
    const CovarianceState initial = thermal_initial_state(params.nbar0);

    SignalCurve curve;
    curve.seed = seed;
    curve.n_repeats = n_repeats;
    curve.env_kind = std::holds_alternative<PureDecoherence>(env)
                         ? EnvironmentKind::pure_decoherence
                         : EnvironmentKind::thermalization;
    curve.points.resize(theta_grid.size());
    const long n = static_cast<long>(theta_grid.size());

#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (long j = 0; j < n; ++j) {
        const double theta = theta_grid[static_cast<size_t>(j)];
        const CovarianceState s = evolve_covariances(initial, env, theta);
        double sum = 0.0;
        double sumsq = 0.0;
        for (int r = 0; r < n_repeats; ++r) {
            CounterRng rng(seed, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(r));
            const double c = static_cast<double>(
                sample_count(s, params.lamb_dicke, fractions.useful, params.photons_in, rng, model));
            sum += c;
            sumsq += c * c;
        }
        const double mean = sum / n_repeats;
        TimeseriesPoint& p = curve.points[static_cast<size_t>(j)];
        p.t_p = theta / params.omega;
        p.theta = theta;
        p.empirical_mean = mean;
        p.empirical_var = n_repeats > 1 ? (sumsq - n_repeats * mean * mean) / (n_repeats - 1) : 0.0;
        const double sin2 = expect_sin2(s.x2, params.lamb_dicke);
        const double sin4 = expect_sin4(s.x2, params.lamb_dicke);
        p.analytic_mean = fractions.useful * params.photons_in * sin2;
        p.analytic_var = counts_variance(fractions.useful, params.photons_in, sin2, sin4, model);
    }
    return curve;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::decoherence_like: return "decoherence-like";
        case Verdict::thermalization_like: return "thermalization-like";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

SpectrumReport detrend_and_periodogram(const SignalCurve& curve) {
    const auto& pts = curve.points;
    const size_t n0 = pts.size();
    if (n0 < 64) throw std::invalid_argument("need at least 64 grid points");
    const double span = pts.back().theta - pts.front().theta;
    if (span < 4.0 * k_pi * (1.0 - 1e-9)) {
        throw std::invalid_argument("need at least four breathing periods (4 pi in theta)");
    }
    const double dtheta = (pts.back().theta - pts.front().theta) / static_cast<double>(n0 - 1);
    for (size_t i = 1; i < n0; ++i) {
        if (std::abs(pts[i].theta - pts[i - 1].theta - dtheta) > 1e-6 * dtheta) {
            throw std::invalid_argument("periodogram needs a uniform theta grid");
        }
    }

    // Moving average over one breathing period; edge points without a full
    // window are dropped rather than padded.
    long w = std::lround(k_pi / dtheta);
    if (w % 2 == 0) ++w;
    w = std::max(3L, w);
    const long half = w / 2;
    const long m = static_cast<long>(n0) - 2 * half;
    if (m < 32) throw std::invalid_argument("too few points left after detrending");
    std::vector<double> detrended(static_cast<size_t>(m));
    double window_sum = 0.0;
    for (long i = 0; i < w; ++i) window_sum += pts[static_cast<size_t>(i)].empirical_mean;
    for (long i = half; i < static_cast<long>(n0) - half; ++i) {
        detrended[static_cast<size_t>(i - half)] =
            pts[static_cast<size_t>(i)].empirical_mean - window_sum / static_cast<double>(w);
        if (i + half + 1 < static_cast<long>(n0)) {
            window_sum += pts[static_cast<size_t>(i + half + 1)].empirical_mean -
                          pts[static_cast<size_t>(i - half)].empirical_mean;
        }
    }

    SpectrumReport rep;
    const long n_bins = m / 2 + 1;
    rep.frequency.resize(static_cast<size_t>(n_bins));
    rep.power.resize(static_cast<size_t>(n_bins));
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n_bins; ++k) {
        double re = 0.0, im = 0.0;
        const double step = -2.0 * k_pi * static_cast<double>(k) / static_cast<double>(m);
        for (long j = 0; j < m; ++j) {
            const double phase = step * static_cast<double>(j);
            re += detrended[static_cast<size_t>(j)] * std::cos(phase);
            im += detrended[static_cast<size_t>(j)] * std::sin(phase);
        }
        rep.power[static_cast<size_t>(k)] = (re * re + im * im) / static_cast<double>(m);
        rep.frequency[static_cast<size_t>(k)] =
            2.0 * k_pi * static_cast<double>(k) / (static_cast<double>(m) * dtheta);
    }

    // Bin nearest the breathing line at angular frequency 2.
    const long k2 = std::lround(2.0 * static_cast<double>(m) * dtheta / (2.0 * k_pi));
    if (k2 < 1 || k2 > n_bins - 4) throw std::invalid_argument("2-Omega line outside the resolved band");
    rep.peak_bin = static_cast<int>(k2);
    rep.peak_power = rep.power[static_cast<size_t>(k2)];

    std::vector<double> floor_bins;
    floor_bins.reserve(static_cast<size_t>(n_bins));
    double max_competitor = 0.0;
    for (long k = 1; k < n_bins; ++k) {
        if (std::abs(k - k2) <= 2) continue;
        floor_bins.push_back(rep.power[static_cast<size_t>(k)]);
        if (rep.frequency[static_cast<size_t>(k)] >= 1.0) {
            max_competitor = std::max(max_competitor, rep.power[static_cast<size_t>(k)]);
        }
    }
    std::nth_element(floor_bins.begin(), floor_bins.begin() + floor_bins.size() / 2,
                     floor_bins.end());
    rep.floor_median = floor_bins[floor_bins.size() / 2];
    const double ln2 = std::log(2.0);
    rep.floor_mean = rep.floor_median / ln2;
    rep.threshold = rep.floor_median * (1.0 + 3.0 / ln2);
    rep.detected = rep.peak_power >= rep.threshold && rep.peak_power >= max_competitor &&
                   rep.peak_power > 0.0;
    rep.empirical_snr =
        rep.floor_mean > 0.0
            ? std::sqrt(std::max(rep.peak_power - rep.floor_mean, 0.0) / (2.0 * rep.floor_mean))
            : 0.0;
    rep.verdict = rep.detected ? Verdict::decoherence_like : Verdict::thermalization_like;
    return rep;
}

DiscriminationResult discriminate(const DimensionlessParams& params, const EnvironmentModel& truth,
                                  const Budget& budget) {
    DiscriminationResult out;
    out.curve = generate_timeseries(params, truth, budget.theta_grid, budget.n_repeats,
                                    params.seed);
    out.spectrum = detrend_and_periodogram(out.curve);
    out.empirical_snr = out.spectrum.empirical_snr;

    const double rate = params.env_kind == EnvironmentKind::pure_decoherence ? params.gamma
                                                                             : params.gamma_th;
    const double span = budget.theta_grid.back() - budget.theta_grid.front();
    const double single_pass =
        snr_spectral(rate, params.nbar0, params.omega_tau, params.photons_in, span).snr_at_span;
    out.predicted_snr = single_pass * std::sqrt(static_cast<double>(budget.n_repeats));
    out.snr_ratio = out.predicted_snr > 0.0 ? out.empirical_snr / out.predicted_snr : 0.0;

    if (out.spectrum.detected) {
        out.verdict = Verdict::decoherence_like;
    } else if (out.predicted_snr >= 3.0) {
        out.verdict = Verdict::thermalization_like;
    } else {
        out.verdict = Verdict::inconclusive;
    }
    return out;
}

}  // namespace ringprobe
