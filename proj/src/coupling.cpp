#include "ringprobe/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "ringprobe/constants.hpp"

namespace ringprobe {

AtomCouplingResult atom_coupling(const AtomCouplingInput& input) {
    for (double v : {input.probe_omega, input.atom_omega, input.atom_linewidth, input.fsr_hz,
                     input.atom_wavelength, input.mode_area}) {
        if (!(v > 0.0)) throw std::invalid_argument("atom coupling inputs must be positive");
    }
    const double detuning = input.atom_omega - input.probe_omega;
    if (detuning == 0.0) throw std::invalid_argument("zero detuning");
    AtomCouplingResult out;
    if (std::abs(detuning) / input.atom_omega > 0.1) {
        out.warnings.push_back("detuning exceeds 10% of the resonance frequency; "
                               "the near-resonant two-level estimate degrades");
    }
    const double g = 3.0 * input.probe_omega / (8.0 * k_pi * input.atom_omega) * input.fsr_hz *
                     (input.atom_linewidth / detuning) *
                     (input.atom_wavelength * input.atom_wavelength / input.mode_area);
    out.g = std::abs(g);
    return out;
}

double clausius_mossotti(double epsilon) {
    if (std::abs(epsilon + 2.0) < 1e-12) {
        throw std::domain_error("permittivity at the plasmon pole eps = -2");
    }
    return (epsilon - 1.0) / (epsilon + 2.0);
}

NanoCouplingResult nanoparticle_coupling(const NanoCouplingInput& input) {
    for (double v : {input.fsr_hz, input.wavelength, input.mode_area, input.density}) {
        if (!(v > 0.0)) throw std::invalid_argument("nanoparticle coupling inputs must be positive");
    }
    if (input.mass < 0.0) throw std::invalid_argument("mass must be nonnegative");
    NanoCouplingResult out;
    out.critical_mass = input.density * std::pow(input.wavelength, 3);
    if (input.mass > out.critical_mass * (1.0 + 1e-9)) {
        out.warnings.push_back("mass exceeds the sub-wavelength critical mass; "
                               "the polarizability coupling model no longer applies");
    }
    out.g = (2.0 * k_pi) * (2.0 * k_pi) * input.mossotti_mu * input.fsr_hz *
            (input.wavelength * input.wavelength / input.mode_area) *
            (input.mass / out.critical_mass);
    return out;
}

}  // namespace ringprobe
