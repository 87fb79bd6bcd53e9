#pragma once

#include <numbers>

namespace ringprobe {

// CODATA exact values (2019 SI redefinition).
inline constexpr double k_hbar = 1.054571817e-34;          // J s
inline constexpr double k_boltzmann = 1.380649e-23;        // J/K
inline constexpr double k_atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double k_pi = std::numbers::pi;

}  // namespace ringprobe
