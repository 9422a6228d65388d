#pragma once

#include <numbers>

namespace magsq::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 (exact in SI since the 2019 redefinition).
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double boltzmann = 1.380649e-23;   // J / K

// YIG material data.
inline constexpr double gyromagnetic_ratio = two_pi * 28.0e9;  // rad s^-1 T^-1
inline constexpr double yig_spin_density = 4.22e27;            // m^-3
inline constexpr double fe3_spin = 2.5;

// Kerr coefficient of the Kittel mode in a 1 mm YIG sphere; scales as 1/V.
inline constexpr double kerr_reference_diameter = 1.0e-3;        // m
inline constexpr double kerr_reference_coeff = two_pi * 1.0e-10;  // rad/s

/// Ordinary frequency (Hz) to angular frequency (rad/s).
constexpr double angular(double hz) noexcept { return two_pi * hz; }
/// Angular frequency (rad/s) to ordinary frequency (Hz).
constexpr double ordinary(double rad_per_s) noexcept { return rad_per_s / two_pi; }

} // namespace magsq::constants
