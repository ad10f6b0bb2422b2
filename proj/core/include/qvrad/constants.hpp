#pragma once

//! Physical constants used for SI conversion (CODATA 2018 exact/recommended
//! values). Everything else in the library works in natural units with
//! hbar = c0 = 1.

namespace qvrad::constants {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double boltzmann = 1.380649e-23;        // J / K
inline constexpr double vacuum_light_speed = 299792458.0;  // m / s

//! Fused-silica Kerr coefficient in W^-1 cm^2.
inline constexpr double fused_silica_n2 = 3.0e-16;

}  // namespace qvrad::constants
