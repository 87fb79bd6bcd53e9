// Timing comparison between the OpenMP stencil kernels and their serial /
// dense reference counterparts. Not part of the test suite.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ringprobe/experiment.hpp"
#include "ringprobe/fock.hpp"

using namespace ringprobe;
namespace chrono = std::chrono;

namespace {

double seconds_since(chrono::steady_clock::time_point t0) {
    return chrono::duration<double>(chrono::steady_clock::now() - t0).count();
}

void bench_lindblad(int dim, int iterations) {
    const EnvironmentModel env = PureDecoherence{0.02};
    FockDensityMatrix rho = thermal_density_matrix(3.0, dim);
    FockDensityMatrix out(dim);
    const OperatorSet ops = build_operators(dim, 0.073);
    const Eigen::MatrixXcd rho_m = rho.as_matrix();

    auto t0 = chrono::steady_clock::now();
    for (int i = 0; i < iterations; ++i) lindblad_rhs(rho, env, out, Execution::serial);
    const double t_serial = seconds_since(t0);

    t0 = chrono::steady_clock::now();
    for (int i = 0; i < iterations; ++i) lindblad_rhs(rho, env, out, Execution::parallel);
    const double t_parallel = seconds_since(t0);

    t0 = chrono::steady_clock::now();
    Eigen::MatrixXcd ref;
    for (int i = 0; i < iterations; ++i) ref = lindblad_rhs_reference(rho_m, env, ops);
    const double t_dense = seconds_since(t0);

    std::printf("lindblad rhs  d=%-4d iters=%-5d stencil serial %8.3f ms  omp %8.3f ms  "
                "dense ref %8.3f ms  (omp speedup %.2fx, vs dense %.1fx)\n",
                dim, iterations, 1e3 * t_serial, 1e3 * t_parallel, 1e3 * t_dense,
                t_serial / t_parallel, t_dense / t_parallel);
}

void bench_timeseries(int points, int repeats) {
    DimensionlessParams p;
    p.lamb_dicke = 0.0726;
    p.gamma = 0.02;
    p.nbar0 = 1.0;
    p.photons_in = 1e9;
    p.coupling_g = 6.2832e4;
    p.kappa = 3.14159e8;
    p.omega = 3.14159e5;
    p.omega_tau = 6.2832e-3;
    p.env_kind = EnvironmentKind::pure_decoherence;
    std::vector<double> grid(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) grid[static_cast<size_t>(i)] = 8.0 * 3.14159265 * i / points;
    const EnvironmentModel env = PureDecoherence{p.gamma};

    auto t0 = chrono::steady_clock::now();
    auto serial = generate_timeseries(p, env, grid, repeats, 7, VarianceModel::coherent,
                                      Execution::serial);
    const double t_serial = seconds_since(t0);

    t0 = chrono::steady_clock::now();
    auto parallel = generate_timeseries(p, env, grid, repeats, 7, VarianceModel::coherent,
                                        Execution::parallel);
    const double t_parallel = seconds_since(t0);

    double max_diff = 0.0;
    for (size_t i = 0; i < serial.points.size(); ++i) {
        max_diff = std::max(max_diff, std::abs(serial.points[i].empirical_mean -
                                               parallel.points[i].empirical_mean));
    }
    std::printf("timeseries    %d points x %d repeats   serial %8.3f ms  omp %8.3f ms  "
                "(speedup %.2fx, max |serial-omp| = %g)\n",
                points, repeats, 1e3 * t_serial, 1e3 * t_parallel, t_serial / t_parallel,
                max_diff);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif
    bench_lindblad(64, 2000);
    bench_lindblad(256, 200);
    bench_timeseries(256, 4000);
    bench_timeseries(512, 12500);
    return 0;
}
