#pragma once

// Ready-made sweeps for the figures of the magnon / phonon squeezing study.
// Parameter values follow the figure captions; axis extents are not given
// there and were chosen to cover the plotted features.

#include <array>
#include <string>
#include <string_view>

#include "../constants.hpp"
#include "config.hpp"

namespace magsq::sweep {

inline constexpr std::array<std::string_view, 10> preset_names = {
    "fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig4c", "figS1"};

/// Cavity-magnon set: omega_a/2pi = 10 GHz, kappa_a/2pi = 5 kappa_m/2pi = 5 MHz,
/// g_ma = 4 kappa_a, T = 20 mK, resonant, theta = 0.
inline PointSpec magnon_base() {
    PointSpec p;
    p.omega_a = 10e9;
    p.kappa_a = 5e6;
    p.kappa_m = 1e6;
    p.g_ma = 4.0 * p.kappa_a;
    p.temperature = 20e-3;
    p.r = 1.0;
    return p;
}

/// Magnomechanical set: omega_b/2pi = 10 MHz, gamma_b/2pi = 100 Hz,
/// kappa_a/2pi = 5 kappa_m/2pi = 3 MHz, T = 10 mK, Delta_s = omega_b,
/// effective Delta_m = omega_b, Delta_a = 1.1 omega_b, g_ma/2pi = 4.2 MHz,
/// G_mb/2pi = 1.5 MHz, g_mb/2pi = 0.1 Hz, 250 um sphere, r = 1.
inline PointSpec phonon_base() {
    PointSpec p;
    p.omega_a = 10e9;
    p.omega_b = 10e6;
    p.gamma_b = 100.0;
    p.kappa_a = 3e6;
    p.kappa_m = 0.6e6;
    p.temperature = 10e-3;
    p.g_ma = 4.2e6;
    p.g_mb = 0.1;
    p.diameter = 250e-6;
    p.r = 1.0;
    p.theta = 0.0;
    p.delta_s = p.omega_b;
    p.delta_m = p.omega_b;
    p.delta_a = 1.1 * p.omega_b;
    p.coupling = 1.5e6;
    p.drive_mode = MagnonDriveMode::target_coupling;
    p.detuning_mode = DetuningMode::effective;
    return p;
}

inline SweepConfig figure_preset(std::string_view name) {
    SweepConfig c;
    c.name = std::string(name);
    c.output_path = c.name + ".csv";

    if (name == "fig2a") {
        c.base = magnon_base();
        c.base.r = 2.0;
        c.target = Target::magnon_variances;
        c.primary = "var_x";
        c.axes = {range_axis("Delta_m_over_2pi_Hz", -10e6, 10e6, 81), range_axis("Delta_a_over_2pi_Hz", -10e6, 10e6, 81)};
    } else if (name == "fig2b") {
        c.base = magnon_base();
        c.target = Target::magnon_variances;
        c.primary = "var_x";
        c.axes = {range_axis("r", 0.0, 2.0, 41), range_axis("theta_rad", 0.0, constants::two_pi, 41)};
    } else if (name == "fig3a" || name == "fig3b") {
        c.base = magnon_base();
        c.target = Target::magnon_variances;
        c.primary = name == "fig3a" ? "var_Y" : "var_x";
        c.axes = {range_axis("r", 0.0, 2.0, 41), range_axis("g_ma_over_2pi_Hz", 0.0, 30e6, 61)};
    } else if (name == "fig3c" || name == "fig3d") {
        c.base = magnon_base();
        c.target = Target::magnon_variances;
        c.primary = name == "fig3c" ? "var_Y" : "var_x";
        c.axes = {range_axis("r", 0.0, 2.0, 41), range_axis("T_K", 10e-3, 500e-3, 50)};
    } else if (name == "fig4a") {
        c.base = phonon_base();
        c.target = Target::mechanical_variance;
        c.primary = "var_q_tilde";
        c.axes = {range_axis("Delta_m_over_2pi_Hz", 5e6, 15e6, 101), range_axis("Delta_a_over_2pi_Hz", 5e6, 15e6, 101)};
    } else if (name == "fig4b") {
        c.base = phonon_base();
        c.target = Target::mechanical_variance;
        c.primary = "var_q_tilde";
        c.axes = {range_axis("g_ma_over_2pi_Hz", 0.0, 8e6, 41), range_axis("G_mb_over_2pi_Hz", 0.0, 3e6, 41)};
    } else if (name == "fig4c") {
        c.base = phonon_base();
        c.target = Target::mechanical_variance;
        c.primary = "var_q_tilde";
        c.axes = {list_axis("T_K", {10e-3, 100e-3, 200e-3}), range_axis("r", 0.0, 1.5, 31)};
    } else if (name == "figS1") {
        c.base = magnon_base();
        c.base.r = 1.0;
        c.base.phi = constants::pi / 2.0;
        c.target = Target::output_spectrum;
        c.primary = "S";
        const double ka = c.base.kappa_a;
        c.axes = {list_axis("g_ma_over_2pi_Hz", {0.0, 2.0 * ka, 4.0 * ka}),
                  range_axis("omega_over_2pi_Hz", -40e6, 40e6, 801)};
    } else {
        std::string list;
        for (auto n : preset_names) list.append(list.empty() ? "" : ", ").append(n);
        throw UsageError("unknown preset '" + std::string(name) + "' (available: " + list + ")");
    }
    return c;
}

} // namespace magsq::sweep
