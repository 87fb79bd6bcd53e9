#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ringprobe {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class EnvironmentKind { pure_decoherence, thermalization };

// Physical description of one experimental scenario, SI units throughout.
// Angular rates (trap frequency, cavity linewidth, coupling, environment
// rates) are stored in rad/s; the free spectral range stays a plain
// frequency in Hz, which is how it enters the coupling estimates.
struct ScenarioConfig {
    double mass = 0.0;                 // kg
    double trap_omega = 0.0;           // rad/s
    double temperature0 = 0.0;         // K
    EnvironmentKind env_kind = EnvironmentKind::pure_decoherence;
    double decoherence_rate = 0.0;     // Gamma [rad/s], pure decoherence
    std::optional<double> diffusion;   // D [kg^2 m^2 / s^3], optional cross-check
    double thermalization_rate = 0.0;  // Gamma_th [rad/s]
    double bath_temperature = 0.0;     // T_e [K]
    double cavity_kappa = 0.0;         // HWHM [rad/s]
    double fsr_hz = 0.0;               // free spectral range [Hz]
    double coupling_g = 0.0;           // rad/s
    double wavelength = 0.0;           // m
    double pulse_length = 0.0;         // s
    double photons_in = 0.0;           // mean incident photon number
    std::vector<double> probe_times;   // t_p grid [s]
    std::uint64_t seed = 1;
};

// Reduced parameter set every downstream computation runs on: lengths in
// sigma0, times in 1/Omega, energies in hbar*Omega.
struct DimensionlessParams {
    double lamb_dicke = 0.0;       // eps = (k sigma0)^2
    double gamma = 0.0;            // Gamma/Omega (pure decoherence)
    double gamma_th = 0.0;         // Gamma_th/Omega (thermalization)
    double nbar0 = 1.0;            // coth(hbar Omega / 2 kB T0)
    double nbar_env = 1.0;         // coth(hbar Omega / 2 kB T_e)
    double g_over_kappa = 0.0;
    double kappa_tau = 0.0;
    double omega_tau = 0.0;
    double omega_over_kappa = 0.0;
    double omega_over_fsr = 0.0;   // Omega / (2 pi nu)
    double photons_in = 0.0;
    double sigma0 = 0.0;           // m, ground-state width
    EnvironmentKind env_kind = EnvironmentKind::pure_decoherence;

    // SI handles kept for the report/file boundary.
    double omega = 0.0;            // rad/s
    double kappa = 0.0;            // rad/s
    double coupling_g = 0.0;       // rad/s
    double pulse_length = 0.0;     // s
    std::uint64_t seed = 1;
    std::vector<double> theta_grid;  // probe grid in units of 1/Omega
};

struct ValidityThresholds {
    double sudden_pulse = 0.2;    // Omega*tau
    double sudden_cavity = 0.1;   // Omega/kappa
    double bad_cavity = 0.2;      // 1/(kappa*tau)
    double mode_spacing = 1.0;    // 2*kappa / (2*pi*nu), strict "<"
    double weak_coupling = 0.1;   // gamma or gamma_th
    double lamb_dicke = 1.0;      // 8*eps*nbar0
};

struct ValidityCheck {
    std::string name;
    double ratio = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ValidityReport {
    std::vector<ValidityCheck> checks;
    bool pass = false;
    std::vector<std::string> notes;
};

// Parses the sectioned key = "value unit" config format. Unknown keys and
// missing mandatory keys are errors; see README for the schema.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

DimensionlessParams derive_dimensionless(const ScenarioConfig& config);

ValidityReport check_validity(const DimensionlessParams& params,
                              const ValidityThresholds& thresholds = {});

// coth(hbar*Omega / (2 kB T)); returns exactly 1 for T <= 0.
double thermal_occupation(double omega, double temperature);

// "number unit" -> SI value for the unit families used in configs
// (frequency, time, length, mass, temperature, bare). Exposed for tests.
double parse_quantity(std::string_view text, std::string_view dimension);

// "start:stop:points" with unit suffixes on start/stop, e.g. "0us:300us:512".
std::vector<double> parse_time_grid(std::string_view text);

}  // namespace ringprobe
