#pragma once

#include <functional>
#include <vector>

#include "ringprobe/covariance.hpp"

namespace ringprobe {

// Gaussian Wigner function W = N exp(-G) determined by the reduced second
// moments. N <= 2, with equality for minimum-uncertainty states.
struct WignerGaussian {
    double x2 = 1.0;
    double p2 = 1.0;
    double xp = 0.0;
    double norm = 2.0;        // N = 2 / sqrt(x2 p2 - xp^2)
    double cross_slope = 0.0; // xp / (2 x2), the p-offset per unit x in G
};

WignerGaussian wigner_from_covariances(const CovarianceState& state);

// <sin^2(2kx)> = (1 - exp(-8 eps x2)) / 2 for the Gaussian position marginal.
double expect_sin2(double x2, double eps);

// <sin^4(2kx)> = (3 - 4 exp(-8 eps x2) + exp(-32 eps x2)) / 8.
double expect_sin4(double x2, double eps);

// Long-wavelength (Lamb-Dicke) expansion of expect_sin4: 3 (4 eps x2)^2.
double expect_sin4_lamb_dicke(double x2, double eps);

// exp(-8 eps x2): probability that probe scattering leaves the initial state.
double debye_waller(double x2, double eps);

// Gauss-Hermite nodes/weights for weight exp(-t^2), by Golub-Welsch.
struct GaussHermiteRule {
    explicit GaussHermiteRule(int order);
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Numeric oracle for position-marginal expectations: integrates f(u) over
// u = kx ~ Normal(0, eps*x2) with a Gauss-Hermite rule (order 64 default).
// Empirical validity for the trigonometric integrands at 1e-10 absolute
// error: 8*eps*x2 <= 45 for sin^2(2u), 8*eps*x2 <= 12 for sin^4(2u); the
// order-64 rule cannot resolve the faster cos(8u) component beyond that.
double quadrature_expectation(const std::function<double(double)>& f, const CovarianceState& state,
                              double eps, int order = 64);

}  // namespace ringprobe
