// Command-line front end: reproducible batch runs with CSV/JSON outputs.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ringprobe/constants.hpp"
#include "ringprobe/coupling.hpp"
#include "ringprobe/covariance.hpp"
#include "ringprobe/experiment.hpp"
#include "ringprobe/fock.hpp"
#include "ringprobe/gaussian.hpp"
#include "ringprobe/io.hpp"
#include "ringprobe/probe.hpp"
#include "ringprobe/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ringprobe;

namespace {

constexpr const char* k_version = "0.1.0";

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> repeats;
    std::optional<std::string> grid;
    std::optional<std::string> env_override;
    bool force = false;
    std::string variance_model = "paper";
};

struct Run {
    ScenarioConfig config;
    DimensionlessParams params;
    ValidityReport validity;
    std::string config_hash;
    std::string started;
    std::vector<std::string> outputs;
    bool force_used = false;
};

VarianceModel variance_model_from_flag(const std::string& flag) {
    if (flag == "paper") return VarianceModel::coherent;
    if (flag == "poisson") return VarianceModel::poisson;
    throw ConfigError("variance model must be paper or poisson");
}

// When the requested environment kind differs from the configured one, a
// matched counterpart with the same initial heating slope is derived:
// decoherence gamma maps to gamma_th = gamma with nbar_e = nbar0 + 1, and
// back. The manifest records the substitution.
EnvironmentModel select_environment(DimensionlessParams& params, const CommonOptions& opts,
                                    std::vector<std::string>& notes) {
    EnvironmentKind want = params.env_kind;
    if (opts.env_override) {
        if (*opts.env_override == "decoherence") {
            want = EnvironmentKind::pure_decoherence;
        } else if (*opts.env_override == "thermalization") {
            want = EnvironmentKind::thermalization;
        } else {
            throw ConfigError("--env must be decoherence or thermalization");
        }
    }
    if (want == params.env_kind) return environment_from_params(params);
    if (want == EnvironmentKind::thermalization) {
        params.gamma_th = params.gamma;
        params.nbar_env = params.nbar0 + 1.0;
        params.gamma = 0.0;
        params.env_kind = want;
        notes.push_back("environment overridden: matched thermalization with gamma_th = gamma, "
                        "nbar_e = nbar0 + 1");
    } else {
        if (params.nbar_env <= params.nbar0) {
            throw ConfigError("cannot derive a matched decoherence rate: bath occupation "
                              "does not exceed the initial one");
        }
        params.gamma = params.gamma_th * (params.nbar_env - params.nbar0);
        params.gamma_th = 0.0;
        params.nbar_env = 1.0;
        params.env_kind = want;
        notes.push_back("environment overridden: matched decoherence with "
                        "gamma = gamma_th * (nbar_e - nbar0)");
    }
    return environment_from_params(params);
}

json validity_to_json(const ValidityReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name}, {"ratio", c.ratio}, {"threshold", c.threshold},
                          {"pass", c.pass}});
    }
    json out = {{"checks", checks}, {"pass", report.pass}};
    if (!report.notes.empty()) out["notes"] = report.notes;
    return out;
}

Run open_run(const CommonOptions& opts) {
    Run run;
    run.started = utc_timestamp();
    const std::string text = read_file(opts.config_path);
    run.config_hash = fnv1a_hex(text);
    run.config = parse_scenario(text);
    if (opts.seed) run.config.seed = *opts.seed;
    if (opts.grid) run.config.probe_times = parse_time_grid(*opts.grid);
    run.params = derive_dimensionless(run.config);
    run.validity = check_validity(run.params);
    return run;
}

// Returns false when the gate blocks the command (exit 1 at the call site).
bool pass_gate(Run& run, const CommonOptions& opts) {
    if (run.validity.pass) return true;
    if (opts.force) {
        run.force_used = true;
        return true;
    }
    std::cerr << "validity gate failed:";
    for (const auto& c : run.validity.checks) {
        if (!c.pass) std::cerr << " " << c.name << " (ratio " << format_double(c.ratio) << ")";
    }
    std::cerr << "\nuse --force to run anyway\n";
    return false;
}

void write_output(Run& run, const CommonOptions& opts, const std::string& name,
                  const std::string& content) {
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / name;
    atomic_write(path, content);
    run.outputs.push_back(path.string());
}

void write_manifest(Run& run, const CommonOptions& opts, const std::string& command,
                    const std::vector<std::string>& notes = {}) {
    json manifest = {
        {"command", command},
        {"config", opts.config_path},
        {"config_hash", run.config_hash},
        {"seed", run.config.seed},
        {"version", k_version},
        {"started", run.started},
        {"finished", utc_timestamp()},
        {"outputs", run.outputs},
        {"force_used", run.force_used},
    };
    if (!notes.empty()) manifest["notes"] = notes;
    fs::create_directories(opts.out_dir);
    atomic_write(fs::path(opts.out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
    std::ostringstream out;
    out << "t_p_seconds,theta,mean_No,var_No,mean_Ne,regime\n";
    for (const auto& p : points) {
        out << format_double(p.t_p) << ',' << format_double(p.theta) << ','
            << format_double(p.mean_odd) << ',' << format_double(p.var_odd) << ','
            << format_double(p.mean_even) << ',' << regime_name(p.regime) << '\n';
    }
    return out.str();
}

std::string timeseries_csv(const SignalCurve& curve) {
    std::ostringstream out;
    out << "t_p_seconds,theta,empirical_mean,empirical_var,analytic_mean,analytic_var\n";
    for (const auto& p : curve.points) {
        out << format_double(p.t_p) << ',' << format_double(p.theta) << ','
            << format_double(p.empirical_mean) << ',' << format_double(p.empirical_var) << ','
            << format_double(p.analytic_mean) << ',' << format_double(p.analytic_var) << '\n';
    }
    return out.str();
}

json spectrum_to_json(const SpectrumReport& rep) {
    return {
        {"frequency_units_of_omega", rep.frequency},
        {"power", rep.power},
        {"peak_bin", rep.peak_bin},
        {"power_at_2omega", rep.peak_power},
        {"floor_median", rep.floor_median},
        {"floor_mean", rep.floor_mean},
        {"detection_threshold", rep.threshold},
        {"empirical_snr", rep.empirical_snr},
        {"detected", rep.detected},
        {"verdict", verdict_name(rep.verdict)},
    };
}

int cmd_validate(const CommonOptions& opts) {
    Run run = open_run(opts);
    std::cout << validity_to_json(run.validity).dump(2) << "\n";
    return run.validity.pass ? 0 : 1;
}

int cmd_curve(const CommonOptions& opts) {
    Run run = open_run(opts);
    if (!pass_gate(run, opts)) return 1;
    std::vector<std::string> notes;
    const EnvironmentModel env = select_environment(run.params, opts, notes);
    const auto points = analytic_signal_curve(run.params, env, run.params.theta_grid,
                                              variance_model_from_flag(opts.variance_model));
    write_output(run, opts, "curve.csv", curve_csv(points));

    // Covariance trajectory underlying the curve.
    std::ostringstream traj;
    traj << "theta,X,P,C\n";
    const CovarianceState initial = thermal_initial_state(run.params.nbar0);
    for (double theta : run.params.theta_grid) {
        const CovarianceState s = evolve_covariances(initial, env, theta);
        traj << format_double(s.theta) << ',' << format_double(s.x2) << ','
             << format_double(s.p2) << ',' << format_double(s.xp) << '\n';
    }
    write_output(run, opts, "trajectory.csv", traj.str());
    write_manifest(run, opts, "curve", notes);
    return 0;
}

int cmd_simulate(const CommonOptions& opts, bool with_spectrum) {
    Run run = open_run(opts);
    if (!pass_gate(run, opts)) return 1;
    std::vector<std::string> notes;
    const EnvironmentModel env = select_environment(run.params, opts, notes);
    const int repeats = opts.repeats.value_or(100);
    const SignalCurve curve =
        generate_timeseries(run.params, env, run.params.theta_grid, repeats, run.config.seed,
                            variance_model_from_flag(opts.variance_model));
    write_output(run, opts, "timeseries.csv", timeseries_csv(curve));
    if (with_spectrum) {
        const SpectrumReport rep = detrend_and_periodogram(curve);
        json doc = spectrum_to_json(rep);
        doc["n_repeats"] = repeats;
        doc["seed"] = run.config.seed;
        write_output(run, opts, "spectrum.json", doc.dump(2) + "\n");
    }
    write_manifest(run, opts, with_spectrum ? "spectrum" : "simulate", notes);
    return 0;
}

int cmd_design(const CommonOptions& opts) {
    Run run = open_run(opts);
    if (!pass_gate(run, opts)) return 1;
    const DimensionlessParams& p = run.params;
    const double rate = p.env_kind == EnvironmentKind::pure_decoherence ? p.gamma : p.gamma_th;
    const auto fractions = interaction_fractions(p.coupling_g, p.kappa);
    const double c0 = contrast(rate, p.nbar0, 0.0);
    const auto single = snr_single(c0, p.photons_in);
    const auto spectral = snr_spectral(rate, p.nbar0, p.omega_tau, p.photons_in);
    const auto massive = massive_limits(rate, p.nbar0, p.omega_tau);
    json doc = {
        {"oscillation_amplitude",
         oscillation_amplitude(p.photons_in, fractions.useful, p.lamb_dicke, rate)},
        {"contrast_initial", c0},
        {"snr_single_point", single.snr},
        {"n_single_point", single.n_required},
        {"snr_spectral_at_t_opt", spectral.snr_at_span},
        {"t_opt_seconds", spectral.t_opt_theta / p.omega},
        {"max_snr", spectral.max_snr},
        {"n_total", spectral.n_total},
        {"massive_limits",
         {{"max_snr", massive.max_snr},
          {"t_opt_seconds", massive.t_opt_theta / p.omega},
          {"n_total", massive.n_total},
          {"low_occupation_warning", massive.low_occupation_warning}}},
        {"input",
         {{"lamb_dicke", p.lamb_dicke},
          {"gamma", rate},
          {"nbar0", p.nbar0},
          {"omega_tau", p.omega_tau},
          {"useful_fraction", fractions.useful},
          {"photons_in", p.photons_in},
          {"sigma0_m", p.sigma0}}},
    };
    write_output(run, opts, "design.json", doc.dump(2) + "\n");
    write_manifest(run, opts, "design");
    return 0;
}

int cmd_oracle(const CommonOptions& opts, double theta_max, int checkpoints) {
    Run run = open_run(opts);
    if (!pass_gate(run, opts)) return 1;
    std::vector<std::string> notes;
    const EnvironmentModel env = select_environment(run.params, opts, notes);
    std::vector<double> grid(static_cast<size_t>(checkpoints));
    for (int i = 0; i < checkpoints; ++i) {
        grid[static_cast<size_t>(i)] = theta_max * static_cast<double>(i) / (checkpoints - 1);
    }
    const MasterRun master = integrate_master_auto(run.params.nbar0, env, grid);
    const OperatorSet ops = build_operators(master.dim, run.params.lamb_dicke);
    const CovarianceState initial = thermal_initial_state(run.params.nbar0);

    json rows = json::array();
    double worst_dx = 0.0, worst_dsin2 = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const auto& rho = master.states[i];
        const FockExpectations e = rho_expectations(rho, ops);
        const CovarianceState ref = evolve_covariances(initial, env, grid[i]);
        const double sin2_ref = expect_sin2(ref.x2, run.params.lamb_dicke);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.as_matrix());
        const double min_eig = solver.eigenvalues().minCoeff();
        worst_dx = std::max({worst_dx, std::abs(e.x2 - ref.x2), std::abs(e.p2 - ref.p2),
                             std::abs(e.xp - ref.xp)});
        worst_dsin2 = std::max(worst_dsin2, std::abs(e.sin2 - sin2_ref));
        rows.push_back({{"theta", grid[i]},
                        {"X", e.x2},
                        {"P", e.p2},
                        {"C", e.xp},
                        {"sin2", e.sin2},
                        {"trace", rho.trace()},
                        {"min_eigenvalue", min_eig},
                        {"delta_X", e.x2 - ref.x2},
                        {"delta_P", e.p2 - ref.p2},
                        {"delta_C", e.xp - ref.xp},
                        {"delta_sin2", e.sin2 - sin2_ref}});
    }
    json doc = {{"dimension", master.dim},
                {"checkpoints", rows},
                {"max_abs_delta_cov", worst_dx},
                {"max_abs_delta_sin2", worst_dsin2}};
    write_output(run, opts, "oracle.json", doc.dump(2) + "\n");
    write_manifest(run, opts, "oracle", notes);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trapped-oscillator ring-cavity probe calculator"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto add_common = [&opts](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--config", opts.config_path, "scenario config file")->required();
        if (needs_out) cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--seed", opts.seed, "override the run seed");
        cmd->add_option("--repeats", opts.repeats, "repeats per grid point");
        cmd->add_option("--grid", opts.grid, "probe grid start:stop:points, e.g. 0us:300us:512");
        cmd->add_option("--env", opts.env_override,
                        "environment override: decoherence|thermalization");
        cmd->add_flag("--force", opts.force, "run even if the validity gate fails");
        cmd->add_option("--variance-model", opts.variance_model,
                        "count variance model: paper|poisson");
    };

    auto* validate = app.add_subcommand("validate", "check the model validity conditions");
    add_common(validate, false);
    auto* curve = app.add_subcommand("curve", "analytic odd-detector signal curve");
    add_common(curve, true);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo photon-count time series");
    add_common(simulate, true);
    auto* spectrum = app.add_subcommand("spectrum", "simulate and locate the 2-Omega line");
    add_common(spectrum, true);
    auto* design = app.add_subcommand("design", "contrast, S/N and repetition estimates");
    add_common(design, true);
    auto* oracle = app.add_subcommand("oracle", "number-basis integrator vs closed forms");
    add_common(oracle, true);
    double theta_max = 4.0 * k_pi;
    int checkpoints = 33;
    oracle->add_option("--theta-max", theta_max, "largest checkpoint time (units of 1/Omega)");
    oracle->add_option("--checkpoints", checkpoints, "number of checkpoints")
        ->check(CLI::Range(2, 10000));

    auto* couple = app.add_subcommand("couple", "coupling-constant estimates");
    std::string kind;
    couple->add_option("--kind", kind, "atom|nano")->required();
    std::string out_dir_couple;
    couple->add_option("--out", out_dir_couple, "optional output directory");
    double probe_hz = 0.0, atom_hz = 0.0, linewidth_hz = 0.0, fsr_hz = 0.0;
    double wavelength_str = 0.0, area = 0.0, mu = 0.0, epsilon_rel = 0.0, mass = 0.0,
           density = 0.0;
    bool have_eps = false;
    couple->add_option("--probe-frequency-hz", probe_hz, "probe frequency [Hz] (atom)");
    couple->add_option("--atom-frequency-hz", atom_hz, "resonance frequency [Hz] (atom)");
    couple->add_option("--linewidth-hz", linewidth_hz, "radiative linewidth [Hz] (atom)");
    couple->add_option("--fsr-hz", fsr_hz, "free spectral range [Hz]")->required();
    couple->add_option("--wavelength-m", wavelength_str, "wavelength [m]")->required();
    couple->add_option("--mode-area-m2", area, "cavity mode cross-section [m^2]")->required();
    couple->add_option("--mu", mu, "Clausius-Mossotti factor (nano)");
    couple->add_option("--epsilon", epsilon_rel, "relative permittivity (nano)")
        ->each([&have_eps](const std::string&) { have_eps = true; });
    couple->add_option("--mass-kg", mass, "particle mass [kg] (nano)");
    couple->add_option("--density-kgm3", density, "mass density [kg/m^3] (nano)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(opts);
        if (curve->parsed()) return cmd_curve(opts);
        if (simulate->parsed()) return cmd_simulate(opts, false);
        if (spectrum->parsed()) return cmd_simulate(opts, true);
        if (design->parsed()) return cmd_design(opts);
        if (oracle->parsed()) return cmd_oracle(opts, theta_max, checkpoints);
        if (couple->parsed()) {
            json doc;
            if (kind == "atom") {
                AtomCouplingInput in;
                in.probe_omega = 2.0 * k_pi * probe_hz;
                in.atom_omega = 2.0 * k_pi * atom_hz;
                in.atom_linewidth = 2.0 * k_pi * linewidth_hz;
                in.fsr_hz = fsr_hz;
                in.atom_wavelength = wavelength_str;
                in.mode_area = area;
                const auto result = atom_coupling(in);
                doc = {{"g", result.g}, {"warnings", result.warnings}};
            } else if (kind == "nano") {
                NanoCouplingInput in;
                in.mossotti_mu = have_eps ? clausius_mossotti(epsilon_rel) : mu;
                in.fsr_hz = fsr_hz;
                in.wavelength = wavelength_str;
                in.mode_area = area;
                in.mass = mass;
                in.density = density;
                const auto result = nanoparticle_coupling(in);
                doc = {{"g", result.g},
                       {"m_cr", result.critical_mass},
                       {"warnings", result.warnings}};
            } else {
                std::cerr << "couple --kind must be atom or nano\n";
                return 2;
            }
            std::cout << doc.dump(2) << "\n";
            if (!out_dir_couple.empty()) {
                fs::create_directories(out_dir_couple);
                atomic_write(fs::path(out_dir_couple) / "coupling.json", doc.dump(2) + "\n");
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
