#pragma once

// Physical constants and unit conversions shared across modules.
//
// Internal circuit arithmetic uses V, fF, ps, fJ and Ohm. Handy identities:
//   Ohm * fF = 1e-3 ps,  fF * V / ps = mA,  fF * V^2 = fJ.

namespace dispel::units {

inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double q_electron = 1.602176634e-19;  // C
inline constexpr double eps0_f_per_m = 8.8541878128e-12;
inline constexpr double eps0_ff_per_um = 8.8541878128e-3;  // fF/um
inline constexpr double eps_r_sio2 = 3.9;
inline constexpr double ln10 = 2.302585092994046;

inline double thermal_voltage(double temperature_k) {
  return k_boltzmann * temperature_k / q_electron;
}

inline constexpr double ohm_ff_to_ps = 1e-3;
inline constexpr double nm_to_um = 1e-3;

}  // namespace dispel::units
