#include "ringprobe/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace ringprobe {

double FockDensityMatrix::trace() const {
    double tr = 0.0;
    for (int i = 0; i < dim; ++i) tr += at(i, i).real();
    return tr;
}

double FockDensityMatrix::hermiticity_error() const {
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
        }
    }
    return worst;
}

double FockDensityMatrix::purity() const {
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            acc += (at(i, j) * at(j, i)).real();
        }
    }
    return acc;
}

Eigen::MatrixXcd FockDensityMatrix::as_matrix() const {
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = at(i, j);
    return m;
}

FockDensityMatrix FockDensityMatrix::from_matrix(const Eigen::MatrixXcd& m) {
    FockDensityMatrix rho(static_cast<int>(m.rows()));
    for (int i = 0; i < rho.dim; ++i)
        for (int j = 0; j < rho.dim; ++j) rho.at(i, j) = m(i, j);
    return rho;
}

OperatorSet build_operators(int dim, double eps) {
    if (dim < 2) throw std::invalid_argument("need at least two levels");
    OperatorSet ops;
    ops.dim = dim;
    ops.eps = eps;
    ops.lower = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) ops.lower(n - 1, n) = std::sqrt(static_cast<double>(n));
    ops.position = ops.lower + ops.lower.adjoint();
    ops.number = ops.lower.adjoint() * ops.lower;
    ops.parity = Eigen::VectorXd(dim);
    for (int n = 0; n < dim; ++n) ops.parity(n) = (n % 2 == 0) ? 1.0 : -1.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(ops.position);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition of the position operator failed");
    }
    const double scale = 2.0 * std::sqrt(eps);  // 2 k x = 2 sqrt(eps) q
    Eigen::VectorXd sins(dim), coss(dim);
    for (int i = 0; i < dim; ++i) {
        sins(i) = std::sin(scale * solver.eigenvalues()(i));
        coss(i) = std::cos(scale * solver.eigenvalues()(i));
    }
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    ops.sin_op = v * sins.asDiagonal() * v.adjoint();
    ops.cos_op = v * coss.asDiagonal() * v.adjoint();
    ops.sin2_op = ops.sin_op * ops.sin_op;
    return ops;
}

FockDensityMatrix thermal_density_matrix(double nbar0, int dim) {
    if (!(nbar0 >= 1.0)) throw std::invalid_argument("thermal occupation must be >= 1");
    if (dim < 2) throw std::invalid_argument("need at least two levels");
    const double r = (nbar0 - 1.0) / (nbar0 + 1.0);  // Boltzmann ratio exp(-hbar Omega/kB T)
    FockDensityMatrix rho(dim);
    double weight = 1.0 - r;
    for (int n = 0; n < dim; ++n) {
        rho.at(n, n) = weight;
        if (n == dim - 1 && weight > 1e-10) {
            throw std::invalid_argument("thermal tail exceeds 1e-10 at the truncation edge; "
                                        "increase the dimension");
        }
        weight *= r;
    }
    return rho;
}

namespace {

struct ThermRates {
    double down = 0.0;  // gamma_th (nbar_e + 1)
    double up = 0.0;    // gamma_th (nbar_e - 1)
};

ThermRates therm_rates(const Thermalization& th) {
    return {th.gamma_th * (th.nbar_env + 1.0), th.gamma_th * (th.nbar_env - 1.0)};
}

// Stencil body for one row. s(k) = sqrt(k+1) is the ladder element; all
// operators are the truncated ones, so every dissipator is exactly
// trace-free in the truncated algebra.
template <typename Fetch>
void rhs_row(int i, int d, const Fetch& rho, const EnvironmentModel& env,
             std::complex<double>* out_row) {
    const auto s = [d](int k) {
        return (k >= 0 && k < d - 1) ? std::sqrt(static_cast<double>(k + 1)) : 0.0;
    };
    const std::complex<double> im(0.0, 1.0);
    if (const auto* dec = std::get_if<PureDecoherence>(&env)) {
        const double g = dec->gamma;
        for (int j = 0; j < d; ++j) {
            // q^2 row/column entries of the truncated q.
            const double qq_ii = s(i - 1) * s(i - 1) + s(i) * s(i);
            const double qq_jj = s(j - 1) * s(j - 1) + s(j) * s(j);
            std::complex<double> acc = (qq_ii + qq_jj) * rho(i, j);
            acc += s(i - 2) * s(i - 1) * rho(i - 2, j) + s(i) * s(i + 1) * rho(i + 2, j);
            acc += s(j - 2) * s(j - 1) * rho(i, j - 2) + s(j) * s(j + 1) * rho(i, j + 2);
            acc -= 2.0 * (s(i - 1) * s(j - 1) * rho(i - 1, j - 1) +
                          s(i - 1) * s(j) * rho(i - 1, j + 1) +
                          s(i) * s(j - 1) * rho(i + 1, j - 1) +
                          s(i) * s(j) * rho(i + 1, j + 1));
            out_row[j] = -im * static_cast<double>(i - j) * rho(i, j) - 0.5 * g * acc;
        }
    } else {
        const auto rates = therm_rates(std::get<Thermalization>(env));
        for (int j = 0; j < d; ++j) {
            // D[b]: b rho b+ - (n rho + rho n)/2, with n = diag(0..d-1).
            std::complex<double> acc =
                rates.down * (s(i) * s(j) * rho(i + 1, j + 1) -
                              0.5 * static_cast<double>(i + j) * rho(i, j));
            // D[b+]: b+ rho b - (b b+ rho + rho b b+)/2; the truncated b b+
            // is diag(1..d-1, 0).
            const double w_i = s(i) * s(i);
            const double w_j = s(j) * s(j);
            acc += rates.up * (s(i - 1) * s(j - 1) * rho(i - 1, j - 1) -
                               0.5 * (w_i + w_j) * rho(i, j));
            out_row[j] = -im * static_cast<double>(i - j) * rho(i, j) + acc;
        }
    }
}

}  // namespace

void lindblad_rhs(const FockDensityMatrix& rho, const EnvironmentModel& env,
                  FockDensityMatrix& out, Execution exec) {
    const int d = rho.dim;
    if (out.dim != d) throw std::invalid_argument("dimension mismatch");
    const std::complex<double>* in = rho.data.data();
    std::complex<double>* o = out.data.data();
    const auto fetch = [in, d](int i, int j) -> std::complex<double> {
        if (i < 0 || j < 0 || i >= d || j >= d) return {0.0, 0.0};
        return in[static_cast<size_t>(i) * d + j];
    };
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (int i = 0; i < d; ++i) {
        rhs_row(i, d, fetch, env, o + static_cast<size_t>(i) * d);
    }
}

Eigen::MatrixXcd lindblad_rhs_reference(const Eigen::MatrixXcd& rho, const EnvironmentModel& env,
                                        const OperatorSet& ops) {
    const std::complex<double> im(0.0, 1.0);
    Eigen::MatrixXcd out = -im * (ops.number * rho - rho * ops.number);
    auto dissipator = [&rho](const Eigen::MatrixXcd& op) {
        const Eigen::MatrixXcd opd = op.adjoint();
        const Eigen::MatrixXcd opdop = opd * op;
        return (op * rho * opd - 0.5 * (opdop * rho + rho * opdop)).eval();
    };
    if (const auto* dec = std::get_if<PureDecoherence>(&env)) {
        const Eigen::MatrixXcd inner = ops.position * rho - rho * ops.position;
        out -= 0.5 * dec->gamma * (ops.position * inner - inner * ops.position);
    } else {
        const auto rates = therm_rates(std::get<Thermalization>(env));
        out += rates.down * dissipator(ops.lower);
        out += rates.up * dissipator(Eigen::MatrixXcd(ops.lower.adjoint()));
    }
    return out;
}

namespace {

void axpy(FockDensityMatrix& y, double a, const FockDensityMatrix& x) {
    for (size_t k = 0; k < y.data.size(); ++k) y.data[k] += a * x.data[k];
}

FockDensityMatrix rk4_step(const FockDensityMatrix& rho, const EnvironmentModel& env, double h,
                           Execution exec, FockDensityMatrix& k, FockDensityMatrix& stage) {
    FockDensityMatrix next = rho;
    lindblad_rhs(rho, env, k, exec);  // k1
    axpy(next, h / 6.0, k);
    stage = rho;
    axpy(stage, 0.5 * h, k);
    lindblad_rhs(stage, env, k, exec);  // k2
    axpy(next, h / 3.0, k);
    stage = rho;
    axpy(stage, 0.5 * h, k);
    lindblad_rhs(stage, env, k, exec);  // k3
    axpy(next, h / 3.0, k);
    stage = rho;
    axpy(stage, h, k);
    lindblad_rhs(stage, env, k, exec);  // k4
    axpy(next, h / 6.0, k);
    return next;
}

}  // namespace

std::vector<FockDensityMatrix> integrate_master(const FockDensityMatrix& rho0,
                                                const EnvironmentModel& env,
                                                std::span<const double> theta_grid,
                                                const MasterOptions& options) {
    std::vector<FockDensityMatrix> out;
    if (theta_grid.empty()) {
        out.push_back(rho0);
        return out;
    }
    double prev = 0.0;
    for (double t : theta_grid) {
        if (t < prev) throw std::invalid_argument("theta grid must be nonnegative and increasing");
        prev = t;
    }
    FockDensityMatrix rho = rho0;
    FockDensityMatrix k(rho0.dim), stage(rho0.dim);
    const double trace0 = rho0.trace();
    double theta = 0.0;
    for (double target : theta_grid) {
        const double span = target - theta;
        if (span > 0.0) {
            const long n = std::max(1L, std::lround(std::ceil(span / options.max_step)));
            const double h = span / static_cast<double>(n);
            for (long i = 0; i < n; ++i) rho = rk4_step(rho, env, h, options.exec, k, stage);
        }
        theta = target;
        if (std::abs(rho.trace() - trace0) > options.trace_drift_abort) {
            throw std::runtime_error("trace drift exceeded tolerance; truncation too small");
        }
        out.push_back(rho);
    }
    return out;
}

FockExpectations rho_expectations(const FockDensityMatrix& rho, const OperatorSet& ops) {
    const int d = rho.dim;
    if (ops.dim != d) throw std::invalid_argument("operator set dimension mismatch");
    double nbar = 0.0;
    std::complex<double> bsq(0.0, 0.0);  // <b^2> = Tr(rho b^2)
    double parity = 0.0;
    for (int n = 0; n < d; ++n) {
        const double pop = rho.at(n, n).real();
        nbar += static_cast<double>(n) * pop;
        parity += ops.parity(n) * pop;
        if (n >= 2) {
            bsq += rho.at(n, n - 2) *
                   std::sqrt(static_cast<double>(n) * static_cast<double>(n - 1));
        }
    }
    FockExpectations e;
    e.x2 = 2.0 * nbar + 1.0 + 2.0 * bsq.real();
    e.p2 = 2.0 * nbar + 1.0 - 2.0 * bsq.real();
    e.xp = 2.0 * bsq.imag();
    e.parity = parity;
    std::complex<double> s2(0.0, 0.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            s2 += rho.at(i, j) * ops.sin2_op(j, i);
        }
    }
    if (std::abs(s2.imag()) > 1e-10) {
        throw std::runtime_error("sin^2 expectation has a large imaginary residue");
    }
    e.sin2 = s2.real();
    return e;
}

FockDensityMatrix click_update(const FockDensityMatrix& rho, const OperatorSet& ops,
                               ClickKind kind) {
    const Eigen::MatrixXcd& op = kind == ClickKind::odd ? ops.sin_op : ops.cos_op;
    const Eigen::MatrixXcd updated = op * rho.as_matrix() * op;
    const double norm = updated.trace().real();
    if (!(norm > 1e-30)) {
        throw std::runtime_error("zero-probability click: update operator annihilates the state");
    }
    return FockDensityMatrix::from_matrix(updated / norm);
}

MasterRun integrate_master_auto(double nbar0, const EnvironmentModel& env,
                                std::span<const double> theta_grid,
                                const MasterOptions& options) {
    int dim = std::max(30, static_cast<int>(std::ceil(10.0 * nbar0)));
    constexpr int k_max_dim = 4096;
    while (true) {
        bool constructed = false;
        try {
            FockDensityMatrix rho0 = thermal_density_matrix(nbar0, dim);
            constructed = true;
            auto states = integrate_master(rho0, env, theta_grid, options);
            double worst_top = 0.0;
            for (const auto& s : states) {
                worst_top = std::max(worst_top, s.at(dim - 1, dim - 1).real() +
                                                    s.at(dim - 2, dim - 2).real());
            }
            if (worst_top < 1e-10) {
                return {dim, std::move(states)};
            }
        } catch (const std::invalid_argument&) {
            if (constructed) throw;
            // Gibbs tail too heavy at this dimension; grow and retry.
        } catch (const std::runtime_error&) {
            // Trace drift from a too-small basis; grow and retry.
        }
        dim *= 2;
        if (dim > k_max_dim) {
            throw std::runtime_error("truncation did not converge below the dimension cap");
        }
    }
}

}  // namespace ringprobe
