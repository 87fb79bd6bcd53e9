#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "ringprobe/covariance.hpp"
#include "ringprobe/probe.hpp"

namespace ringprobe {

// Truncated number-basis density operator, row-major d x d.
struct FockDensityMatrix {
    int dim = 0;
    std::vector<std::complex<double>> data;

    explicit FockDensityMatrix(int d) : dim(d), data(static_cast<size_t>(d) * d) {}
    std::complex<double>& at(int i, int j) { return data[static_cast<size_t>(i) * dim + j]; }
    const std::complex<double>& at(int i, int j) const {
        return data[static_cast<size_t>(i) * dim + j];
    }

    double trace() const;
    double hermiticity_error() const;   // max |rho_ij - conj(rho_ji)|
    double purity() const;              // Tr rho^2 (assumes Hermitian)
    Eigen::MatrixXcd as_matrix() const;
    static FockDensityMatrix from_matrix(const Eigen::MatrixXcd& m);
};

// Ladder-operator matrices plus the trigonometric probe operators
// sin(2 sqrt(eps) q) and cos(2 sqrt(eps) q), built by eigendecomposition of
// q = b + b^dag. Parity is diag((-1)^n).
struct OperatorSet {
    int dim = 0;
    double eps = 0.0;
    Eigen::MatrixXcd lower;       // b
    Eigen::MatrixXcd position;    // q = b + b^dag
    Eigen::MatrixXcd number;      // b^dag b
    Eigen::VectorXd parity;       // diagonal entries +-1
    Eigen::MatrixXcd sin_op;      // sin(2 sqrt(eps) q)
    Eigen::MatrixXcd cos_op;
    Eigen::MatrixXcd sin2_op;     // sin_op^2
};

OperatorSet build_operators(int dim, double eps);

// Diagonal Gibbs state with x2 = p2 = nbar0. Throws if the truncated tail
// at level dim-1 carries more than 1e-10 population.
FockDensityMatrix thermal_density_matrix(double nbar0, int dim);

// d rho / d theta for -i[n, rho] plus the environment dissipator, as a
// banded stencil over matrix elements (the fast path; OpenMP over rows).
// Pure decoherence: -(gamma/2) [q, [q, rho]].
// Thermalization:   gdown D[b] + gup D[b^dag] with gdown = gamma_th (nbar_e + 1),
// gup = gamma_th (nbar_e - 1), i.e. rate difference 2 gamma_th and detailed
// balance ratio gdown/gup = (nbar_e + 1)/(nbar_e - 1).
void lindblad_rhs(const FockDensityMatrix& rho, const EnvironmentModel& env,
                  FockDensityMatrix& out, Execution exec = Execution::parallel);

// Dense-matrix reference for the same generator, kept for testing the
// stencil kernel and as the benchmark baseline.
Eigen::MatrixXcd lindblad_rhs_reference(const Eigen::MatrixXcd& rho, const EnvironmentModel& env,
                                        const OperatorSet& ops);

struct MasterOptions {
    double max_step = 2.0 * 3.14159265358979323846 / 1000.0;
    double trace_drift_abort = 1e-6;
    Execution exec = Execution::parallel;
};

// Fixed-step RK4 along theta_grid (same grid conventions as
// integrate_covariances). Aborts if the trace drifts beyond the option
// threshold, which signals a too-small truncation.
std::vector<FockDensityMatrix> integrate_master(const FockDensityMatrix& rho0,
                                                const EnvironmentModel& env,
                                                std::span<const double> theta_grid,
                                                const MasterOptions& options = {});

struct FockExpectations {
    double x2 = 0.0;
    double p2 = 0.0;
    double xp = 0.0;
    double sin2 = 0.0;
    double parity = 0.0;
};

FockExpectations rho_expectations(const FockDensityMatrix& rho, const OperatorSet& ops);

enum class ClickKind { odd, even };

// Measurement update after a detector click: rho -> K S rho S with
// S = sin(2kx) for an odd click, cos(2kx) for an even one. A definite-parity
// state flips parity on an odd click and keeps it on an even click.
FockDensityMatrix click_update(const FockDensityMatrix& rho, const OperatorSet& ops,
                               ClickKind kind);

// Truncation dimension that keeps the top two levels below 1e-10 population
// over the whole trajectory: start at max(30, ceil(10 nbar0)), double as
// needed. Returns the trajectory and the dimension used.
struct MasterRun {
    int dim = 0;
    std::vector<FockDensityMatrix> states;
};

MasterRun integrate_master_auto(double nbar0, const EnvironmentModel& env,
                                std::span<const double> theta_grid,
                                const MasterOptions& options = {});

}  // namespace ringprobe
