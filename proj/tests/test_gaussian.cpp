#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>

#include "ringprobe/gaussian.hpp"

using namespace ringprobe;

namespace {

double sin2_of(double u) { return std::sin(2.0 * u) * std::sin(2.0 * u); }
double sin4_of(double u) { return sin2_of(u) * sin2_of(u); }

// (eps, x2) pairs inside the quadrature oracle's documented domain.
struct GridPoint {
    double eps, x2;
};
constexpr GridPoint k_oracle_grid[] = {
    {1e-3, 0.1}, {1e-3, 1.0}, {1e-3, 50.0}, {0.01, 0.5}, {0.01, 10.0}, {0.01, 50.0},
    {0.073, 1.0}, {0.073, 5.0}, {0.073, 20.0}, {0.2, 0.1}, {0.2, 3.0}, {0.2, 7.0},
    {0.3, 1.0}, {0.3, 5.0},
};

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("wigner normalization") {
    CHECK(wigner_from_covariances({0.0, 1.0, 1.0, 0.0}).norm == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(wigner_from_covariances({0.0, 10.0, 10.0, 0.0}).norm == doctest::Approx(0.2).epsilon(1e-15));
    const WignerGaussian w = wigner_from_covariances({0.0, 2.0, 1.5, 1.0});
    CHECK(w.norm == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(w.cross_slope == doctest::Approx(0.25));
    CHECK(w.norm <= 2.0);
    CHECK_THROWS_AS(wigner_from_covariances({0.0, 1.0, 1.0, 0.5}), std::domain_error);
}

TEST_CASE("closed-form expectations") {
    SUBCASE("limits") {
        CHECK(expect_sin2(1e-14, 0.073) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(expect_sin2(1e9, 0.073) == 0.5);  // clamped saturation
        CHECK(expect_sin4(1e-14, 0.073) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(expect_sin4(1e9, 0.073) == doctest::Approx(3.0 / 8.0));
        CHECK(debye_waller(1e9, 1.0) == 0.0);
        CHECK(debye_waller(1.0, 1e-16) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("frozen values") {
        CHECK(expect_sin2(1.0, 0.073) == doctest::Approx(0.22116837684).epsilon(1e-9));
        CHECK(debye_waller(1.0, 0.073) == doctest::Approx(0.55766324632).epsilon(1e-9));
        CHECK(expect_sin4(1.0, 0.01) == doctest::Approx(0.00421045644).epsilon(1e-8));
    }
    SUBCASE("long-wavelength form overshoots by 5u/3") {
        // ratio LD/exact = 1 + (5/3) 8 eps x2 + O(u^2)
        CHECK(expect_sin4_lamb_dicke(1.0, 0.01) / expect_sin4(1.0, 0.01) ==
              doctest::Approx(1.14).epsilon(0.01));
        CHECK(expect_sin4_lamb_dicke(1.0, 0.005) / expect_sin4(1.0, 0.005) ==
              doctest::Approx(1.0).epsilon(0.10));
    }
    SUBCASE("bounds and monotonicity") {
        double prev2 = -1.0, prev4 = -1.0;
        for (double x2 = 0.05; x2 < 40.0; x2 *= 1.4) {
            const double s2 = expect_sin2(x2, 0.05);
            const double s4 = expect_sin4(x2, 0.05);
            CHECK(s2 >= 0.0);
            CHECK(s2 <= 0.5);
            CHECK(s4 >= 0.0);
            CHECK(s4 <= 3.0 / 8.0);
            CHECK(s2 > prev2);
            CHECK(s4 > prev4);
            CHECK(s4 - s2 * s2 >= 0.0);  // nonnegative count variance upstream
            prev2 = s2;
            prev4 = s4;
        }
    }
    SUBCASE("debye-waller identity") {
        for (const auto& g : k_oracle_grid) {
            CHECK(debye_waller(g.x2, g.eps) + 2.0 * expect_sin2(g.x2, g.eps) ==
                  doctest::Approx(1.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("quadrature oracle agrees with the closed forms") {
    for (const auto& g : k_oracle_grid) {
        const CovarianceState state{0.0, g.x2, g.x2, 0.0};
        const double u = 8.0 * g.eps * g.x2;
        if (u <= 45.0) {
            CHECK(quadrature_expectation(sin2_of, state, g.eps) ==
                  doctest::Approx(expect_sin2(g.x2, g.eps)).scale(1.0).epsilon(1e-10));
        }
        if (u <= 12.0) {
            CHECK(quadrature_expectation(sin4_of, state, g.eps) ==
                  doctest::Approx(expect_sin4(g.x2, g.eps)).scale(1.0).epsilon(1e-10));
        }
    }
    SUBCASE("normalization") {
        const CovarianceState state{0.0, 1.0, 1.0, 0.0};
        CHECK(quadrature_expectation([](double) { return 1.0; }, state, 0.073) ==
              doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("specific oracle spot checks") {
        const CovarianceState g1{0.0, 1.0, 1.0, 0.0};
        CHECK(quadrature_expectation(sin2_of, g1, 0.073) ==
              doctest::Approx(expect_sin2(1.0, 0.073)).epsilon(1e-10));
        const CovarianceState g3{0.0, 3.0, 3.0, 0.0};
        CHECK(quadrature_expectation(sin4_of, g3, 0.2) ==
              doctest::Approx(expect_sin4(3.0, 0.2)).scale(1.0).epsilon(1e-10));
    }
    SUBCASE("non-finite integrand is an error") {
        const CovarianceState state{0.0, 1.0, 1.0, 0.0};
        CHECK_THROWS_AS(
            quadrature_expectation([](double) { return std::numeric_limits<double>::quiet_NaN(); },
                                   state, 0.1),
            std::runtime_error);
    }
}

TEST_CASE("order convergence study: 64 vs 128") {
    // Inside the documented domain the two orders agree to 1e-12.
    for (const auto& g : k_oracle_grid) {
        if (8.0 * g.eps * g.x2 > 10.0) continue;
        const CovarianceState state{0.0, g.x2, g.x2, 0.0};
        const double a2 = quadrature_expectation(sin2_of, state, g.eps, 64);
        const double b2 = quadrature_expectation(sin2_of, state, g.eps, 128);
        CHECK(a2 == doctest::Approx(b2).scale(1.0).epsilon(1e-12));
        const double a4 = quadrature_expectation(sin4_of, state, g.eps, 64);
        const double b4 = quadrature_expectation(sin4_of, state, g.eps, 128);
        CHECK(a4 == doctest::Approx(b4).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gauss-hermite rule sanity") {
    const GaussHermiteRule rule(64);
    double sum = 0.0, sum2 = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i];
        sum2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    const double sqrt_pi = std::sqrt(3.14159265358979323846);
    CHECK(sum == doctest::Approx(sqrt_pi).epsilon(1e-13));
    CHECK(sum2 == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-12));
}

}  // TEST_SUITE
