#pragma once

#include "magsq/magsq.hpp"

namespace fixture {

using magsq::constants::angular;

// Cavity-magnon set used for the magnon squeezing results.
inline magsq::SystemParams magnon_params(double g_ma_hz = 20e6, double temp = 20e-3) {
    magsq::SystemParams s;
    s.cavity_freq = angular(10e9);
    s.magnon_freq = angular(10e9);
    s.kappa_a = angular(5e6);
    s.kappa_m = angular(1e6);
    s.g_ma = angular(g_ma_hz);
    s.temperature = temp;
    return s;
}

// Magnomechanical set used for the phonon squeezing results.
inline magsq::SystemParams phonon_params(double temp = 10e-3, double g_ma_hz = 4.2e6) {
    magsq::SystemParams s;
    s.cavity_freq = angular(10e9);
    s.magnon_freq = angular(10e9);
    s.mech_freq = angular(10e6);
    s.kappa_a = angular(3e6);
    s.kappa_m = angular(0.6e6);
    s.gamma_b = angular(100.0);
    s.g_ma = angular(g_ma_hz);
    s.g_mb = angular(0.1);
    s.temperature = temp;
    s.sphere_diameter = 250e-6;
    return s;
}

inline magsq::WorkingPoint phonon_working_point(const magsq::SystemParams& s, double coupling_hz = 1.5e6) {
    return magsq::working_point_for_coupling(s, angular(coupling_hz), 1.1 * s.mech_freq, s.mech_freq);
}

inline magsq::ThreeModeSystem phonon_system(double r, double temp = 10e-3, double coupling_hz = 1.5e6,
                                            double g_ma_hz = 4.2e6) {
    const auto s = phonon_params(temp, g_ma_hz);
    const auto wp = phonon_working_point(s, coupling_hz);
    return magsq::build_three_mode(s, {r, 0.0, s.mech_freq}, wp);
}

} // namespace fixture
