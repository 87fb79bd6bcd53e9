#include "ringprobe/gaussian.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "ringprobe/constants.hpp"

namespace ringprobe {

WignerGaussian wigner_from_covariances(const CovarianceState& state) {
    const double det = state.uncertainty_product();
    if (!(state.x2 > 0.0) || !(state.p2 > 0.0) || det < 1.0 - 1e-12) {
        throw std::domain_error("covariances violate the uncertainty relation");
    }
    WignerGaussian w;
    w.x2 = state.x2;
    w.p2 = state.p2;
    w.xp = state.xp;
    w.norm = 2.0 / std::sqrt(det);
    w.cross_slope = state.xp / (2.0 * state.x2);
    return w;
}

namespace {

// Exponentials below exp(-700) underflow; the expectations have saturated to
// machine precision long before, so clamp instead of returning junk.
double safe_exp(double arg) { return arg < -700.0 ? 0.0 : std::exp(arg); }

}  // namespace

double expect_sin2(double x2, double eps) {
    return 0.5 * (1.0 - safe_exp(-8.0 * eps * x2));
}

double expect_sin4(double x2, double eps) {
    const double u = 8.0 * eps * x2;
    return (3.0 - 4.0 * safe_exp(-u) + safe_exp(-4.0 * u)) / 8.0;
}

double expect_sin4_lamb_dicke(double x2, double eps) {
    const double v = 4.0 * eps * x2;
    return 3.0 * v * v;
}

double debye_waller(double x2, double eps) {
    return safe_exp(-8.0 * eps * x2);
}

GaussHermiteRule::GaussHermiteRule(int order) {
    if (order < 2) throw std::invalid_argument("Gauss-Hermite order must be >= 2");
    // Jacobi matrix of the (monic) Hermite recurrence for weight exp(-t^2):
    // off-diagonal beta_k = sqrt(k/2). Nodes are its eigenvalues, weights
    // sqrt(pi) times the squared first eigenvector components.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double b = std::sqrt(0.5 * k);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Gauss-Hermite eigensolve failed");
    nodes.resize(order);
    weights.resize(order);
    const double mu0 = std::sqrt(k_pi);
    for (int i = 0; i < order; ++i) {
        nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        weights[i] = mu0 * v0 * v0;
    }
}

double quadrature_expectation(const std::function<double(double)>& f, const CovarianceState& state,
                              double eps, int order) {
    if (!(state.x2 > 0.0) || !(eps > 0.0)) {
        throw std::invalid_argument("quadrature needs positive marginal variance");
    }
    static thread_local int cached_order = 64;
    static thread_local GaussHermiteRule cached_rule(64);
    if (cached_order != order) {
        cached_rule = GaussHermiteRule(order);
        cached_order = order;
    }
    const double scale = std::sqrt(2.0 * eps * state.x2);  // u = scale * t
    double acc = 0.0;
    for (size_t i = 0; i < cached_rule.nodes.size(); ++i) {
        const double value = f(scale * cached_rule.nodes[i]);
        if (!std::isfinite(value)) throw std::runtime_error("non-finite integrand in quadrature");
        acc += cached_rule.weights[i] * value;
    }
    return acc / std::sqrt(k_pi);
}

}  // namespace ringprobe
