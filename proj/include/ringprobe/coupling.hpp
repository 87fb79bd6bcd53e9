#pragma once

#include <string>
#include <vector>

namespace ringprobe {

// Two-level-atom estimate of the cavity coupling constant. The free
// spectral range enters as a plain frequency in Hz; the result carries the
// same mixed convention and is reported in 1/s.
struct AtomCouplingInput {
    double probe_omega = 0.0;      // rad/s
    double atom_omega = 0.0;       // rad/s
    double atom_linewidth = 0.0;   // rad/s
    double fsr_hz = 0.0;           // Hz
    double atom_wavelength = 0.0;  // m
    double mode_area = 0.0;        // m^2
};

struct AtomCouplingResult {
    double g = 0.0;  // magnitude, 1/s
    std::vector<std::string> warnings;
};

// g = (3 w_c / 8 pi w_A) nu (gamma_A / (w_A - w_c)) (lambda_A^2 / A).
AtomCouplingResult atom_coupling(const AtomCouplingInput& input);

// mu = (eps - 1) / (eps + 2); throws at the plasmon pole eps = -2.
double clausius_mossotti(double epsilon);

struct NanoCouplingInput {
    double mossotti_mu = 0.0;  // (eps-1)/(eps+2), dimensionless
    double fsr_hz = 0.0;       // Hz
    double wavelength = 0.0;   // m
    double mode_area = 0.0;    // m^2
    double mass = 0.0;         // kg
    double density = 0.0;      // kg/m^3
};

struct NanoCouplingResult {
    double g = 0.0;             // 1/s
    double critical_mass = 0.0; // density * wavelength^3, kg
    std::vector<std::string> warnings;
};

// g = (2 pi)^2 mu nu (lambda^2 / A) (m / m_cr) with m_cr = density lambda^3.
NanoCouplingResult nanoparticle_coupling(const NanoCouplingInput& input);

}  // namespace ringprobe
