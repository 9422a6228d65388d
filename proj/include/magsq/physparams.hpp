#pragma once

// Device parameters and the derived quantities that feed the linearized
// fluctuation models: thermal occupations, squeezed-bath moments, spin count,
// Rabi frequency, the classical magnon working point and its validity checks.
//
// Units: every rate and frequency is angular (rad/s). Conversion from the
// ordinary frequencies used in configuration files happens at the edges.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "constants.hpp"
#include "errors.hpp"

namespace magsq {

using cplx = std::complex<double>;

struct SystemParams {
    double cavity_freq = 0.0;   // omega_a
    double magnon_freq = 0.0;   // omega_m
    double mech_freq = 0.0;     // omega_b
    double kappa_a = 0.0;       // cavity amplitude decay
    double kappa_m = 0.0;       // magnon amplitude decay
    double gamma_b = 0.0;       // mechanical damping
    double g_ma = 0.0;          // cavity-magnon beamsplitter coupling
    double g_mb = 0.0;          // bare magnomechanical coupling
    double rabi = 0.0;          // magnon drive Rabi frequency Omega
    double temperature = 0.0;   // K
    double sphere_diameter = 0.0;  // m
    double drive_freq = 0.0;    // omega_0
    double squeeze_freq = 0.0;  // omega_s

    /// Throws InvalidParameter on negative rates; with `steady_state` also
    /// requires strictly positive cavity and magnon linewidths.
    void validate(bool steady_state = false) const {
        auto nonneg = [](double v, const char* name) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw InvalidParameter(std::string(name) + " must be finite and >= 0");
        };
        nonneg(cavity_freq, "cavity_freq");
        nonneg(magnon_freq, "magnon_freq");
        nonneg(mech_freq, "mech_freq");
        nonneg(kappa_a, "kappa_a");
        nonneg(kappa_m, "kappa_m");
        nonneg(gamma_b, "gamma_b");
        nonneg(g_ma, "g_ma");
        nonneg(g_mb, "g_mb");
        nonneg(rabi, "rabi");
        nonneg(temperature, "temperature");
        nonneg(sphere_diameter, "sphere_diameter");
        nonneg(drive_freq, "drive_freq");
        nonneg(squeeze_freq, "squeeze_freq");
        if (steady_state && (kappa_a <= 0.0 || kappa_m <= 0.0))
            throw InvalidParameter("kappa_a and kappa_m must be > 0 for a steady state");
    }
};

/// Broadband squeezed vacuum driving the cavity.
struct SqueezedDrive {
    double r = 0.0;           // squeezing parameter
    double theta = 0.0;       // squeezing phase
    double detuning_s = 0.0;  // omega_s - omega_0 (zero in the omega_s frame)
};

/// Second moments of the squeezed bath: <a_in^dag a_in> = n, <a_in a_in> = m.
struct BathMoments {
    double n = 0.0;
    cplx m{0.0, 0.0};
};

/// Mean thermal occupation 1/(exp(hbar w / kB T) - 1); zero at T = 0.
inline double thermal_occupation(double freq, double temp) {
    if (!(freq > 0.0)) throw InvalidParameter("thermal_occupation: frequency must be > 0");
    if (!(temp >= 0.0)) throw InvalidParameter("thermal_occupation: temperature must be >= 0");
    if (temp == 0.0) return 0.0;
    const double x = constants::hbar * freq / (constants::boltzmann * temp);
    return 1.0 / std::expm1(x);
}

inline BathMoments squeezed_noise_moments(const SqueezedDrive& drive) {
    if (!(drive.r >= 0.0)) throw InvalidParameter("squeezing parameter r must be >= 0");
    const double sh = std::sinh(drive.r);
    const double ch = std::cosh(drive.r);
    return {sh * sh, std::polar(sh * ch, drive.theta)};
}

/// Number of Fe3+ spins in a YIG sphere of the given diameter.
inline double spin_count(double diameter) {
    if (!(diameter >= 0.0)) throw InvalidParameter("sphere diameter must be >= 0");
    return constants::yig_spin_density * (constants::pi / 6.0) * diameter * diameter * diameter;
}

/// Rabi frequency of a drive field of amplitude B0 on N spins.
inline double rabi_frequency(double b0, double spins) {
    if (!(b0 >= 0.0) || !(spins >= 0.0))
        throw InvalidParameter("rabi_frequency: B0 and N must be >= 0");
    return std::sqrt(5.0) / 4.0 * constants::gyromagnetic_ratio * std::sqrt(spins) * b0;
}

/// Kerr coefficient (rad/s), scaled as 1/V from the 1 mm reference sphere.
inline double kerr_coefficient(double diameter) {
    if (!(diameter > 0.0)) throw InvalidParameter("kerr_coefficient: diameter must be > 0");
    const double ratio = constants::kerr_reference_diameter / diameter;
    return constants::kerr_reference_coeff * ratio * ratio * ratio;
}

/// How the magnon detuning passed to working_point() is to be interpreted.
enum class DetuningMode {
    effective,  // value is the shifted detuning (Delta_m + g_mb <q>)
    bare,       // value is omega_m - omega_0; the shift is solved self-consistently
};

struct WorkingPoint {
    double detuning_a = 0.0;
    double detuning_m = 0.0;      // bare
    double eff_detuning_m = 0.0;  // includes the radiation-pressure-like shift
    double rabi = 0.0;
    cplx mean_magnon{0.0, 0.0};
    cplx approx_mean_magnon{0.0, 0.0};  // large-detuning closed form
    double mean_position = 0.0;
    cplx eff_coupling{0.0, 0.0};  // i sqrt(2) g_mb <m>
    int iterations = 0;

    /// Coupling entering the drift matrix.
    double drift_coupling() const noexcept { return std::abs(eff_coupling); }

    /// |Re<m>| / |<m>|: zero when <m> is purely imaginary, which is the
    /// regime where a real effective coupling is exact.
    double phase_residual() const noexcept {
        const double a = std::abs(mean_magnon);
        return a > 0.0 ? std::abs(mean_magnon.real()) / a : 0.0;
    }
};

namespace detail {

inline cplx magnon_denominator(const SystemParams& p, double delta_a, double eff_delta_m) {
    const cplx ca{p.kappa_a, delta_a};
    const cplx cm{p.kappa_m, eff_delta_m};
    return p.g_ma * p.g_ma + cm * ca;
}

inline cplx mean_magnon_exact(const SystemParams& p, double rabi, double delta_a, double eff_delta_m) {
    const cplx den = magnon_denominator(p, delta_a, eff_delta_m);
    if (std::abs(den) == 0.0) throw NumericalError("working point: singular magnon response");
    return rabi * cplx{p.kappa_a, delta_a} / den;
}

inline cplx mean_magnon_approx(const SystemParams& p, double rabi, double delta_a, double eff_delta_m) {
    const double den = p.g_ma * p.g_ma - eff_delta_m * delta_a;
    if (den == 0.0) return {0.0, 0.0};
    return cplx{0.0, rabi * delta_a / den};
}

inline double frequency_shift(const SystemParams& p, double magnon_number) {
    if (p.g_mb == 0.0) return 0.0;
    return p.g_mb * p.g_mb / p.mech_freq * magnon_number;
}

inline WorkingPoint finish_working_point(const SystemParams& p, WorkingPoint wp) {
    const double n = std::norm(wp.mean_magnon);
    wp.mean_position = p.g_mb == 0.0 ? 0.0 : -(p.g_mb / p.mech_freq) * n;
    wp.eff_coupling = cplx{0.0, std::sqrt(2.0) * p.g_mb} * wp.mean_magnon;
    wp.approx_mean_magnon = mean_magnon_approx(p, wp.rabi, wp.detuning_a, wp.eff_detuning_m);
    return wp;
}

} // namespace detail

/// Classical steady state of the driven magnon and the mechanical
/// displacement it induces.
///
/// In `effective` mode `delta_m` is the shifted detuning and <m> follows in
/// closed form. In `bare` mode the shift depends on |<m>|^2 and is found by
/// damped fixed-point iteration (at most 10^4 steps) started from the bare
/// value. In the bistable regime this picks one branch only.
inline WorkingPoint working_point(const SystemParams& p, double rabi, double delta_a, double delta_m,
                                  DetuningMode mode = DetuningMode::effective) {
    p.validate(true);
    if (!(p.mech_freq > 0.0)) throw InvalidParameter("working point: mech_freq must be > 0");
    if (!(rabi >= 0.0)) throw InvalidParameter("working point: Rabi frequency must be >= 0");

    WorkingPoint wp;
    wp.detuning_a = delta_a;
    wp.rabi = rabi;

    if (mode == DetuningMode::effective) {
        wp.eff_detuning_m = delta_m;
        wp.mean_magnon = detail::mean_magnon_exact(p, rabi, delta_a, delta_m);
        wp.detuning_m = delta_m + detail::frequency_shift(p, std::norm(wp.mean_magnon));
        return detail::finish_working_point(p, wp);
    }

    wp.detuning_m = delta_m;
    auto update = [&](double eff) {
        const cplx m = detail::mean_magnon_exact(p, rabi, delta_a, eff);
        return delta_m - detail::frequency_shift(p, std::norm(m));
    };

    constexpr int max_iter = 10000;
    const double scale = std::abs(delta_m) + p.kappa_m + p.kappa_a;
    double eff = delta_m;
    double relax = 1.0;
    double last_step = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iter; ++it) {
        const double target = update(eff);
        const double step = target - eff;
        if (std::abs(step) > last_step) relax = std::max(relax * 0.5, 1e-3);
        last_step = std::abs(step);
        eff += relax * step;
        wp.iterations = it;
        if (std::abs(step) <= 1e-15 * scale) {
            wp.eff_detuning_m = eff;
            wp.mean_magnon = detail::mean_magnon_exact(p, rabi, delta_a, eff);
            return detail::finish_working_point(p, wp);
        }
    }
    throw ConvergenceError("working point: fixed point not reached within 10^4 iterations");
}

/// Inverse of working_point() in effective mode: the Rabi frequency that
/// produces a given |G_mb| at fixed detunings.
inline WorkingPoint working_point_for_coupling(const SystemParams& p, double target_coupling,
                                               double delta_a, double eff_delta_m) {
    p.validate(true);
    if (!(target_coupling >= 0.0)) throw InvalidParameter("target coupling must be >= 0");
    if (target_coupling > 0.0 && !(p.g_mb > 0.0))
        throw InvalidParameter("a nonzero target coupling needs g_mb > 0");
    const double amplitude = target_coupling == 0.0 ? 0.0 : target_coupling / (std::sqrt(2.0) * p.g_mb);
    const double gain = std::abs(cplx{p.kappa_a, delta_a}) /
                        std::abs(detail::magnon_denominator(p, delta_a, eff_delta_m));
    return working_point(p, amplitude / gain, delta_a, eff_delta_m, DetuningMode::effective);
}

/// Relative residual of the <m> fixed point, |<m> - rhs(<m>)| / |<m>|.
inline double working_point_residual(const SystemParams& p, const WorkingPoint& wp) {
    const double a = std::abs(wp.mean_magnon);
    if (a == 0.0) return 0.0;
    const double eff = wp.detuning_m - detail::frequency_shift(p, std::norm(wp.mean_magnon));
    const cplx rhs = detail::mean_magnon_exact(p, wp.rabi, wp.detuning_a, eff);
    return std::abs(wp.mean_magnon - rhs) / a;
}

struct ValidityReport {
    double magnon_number = 0.0;  // |<m>|^2
    double spin_bound = 0.0;     // 2 N s = 5 N
    double kerr_coeff = 0.0;     // rad/s
    double kerr_drive = 0.0;     // K |<m>|^3, rad/s
    double rabi = 0.0;
    double low_lying_ratio = 0.0;
    double kerr_ratio = 0.0;
    bool low_lying_ok = true;
    bool kerr_ok = true;          // ratio below the strict margin
    bool kerr_ok_relaxed = true;  // ratio below the relaxed margin

    static constexpr double strict_margin = 0.01;
    static constexpr double relaxed_margin = 0.1;
};

/// Checks the two conditions under which the linearized model holds: the
/// magnon population stays far below the spin reservoir, and the Kerr drive
/// term stays far below the Rabi frequency.
inline ValidityReport validity_report(const SystemParams& p, const WorkingPoint& wp) {
    ValidityReport v;
    const double amp = std::abs(wp.mean_magnon);
    v.magnon_number = amp * amp;
    v.spin_bound = 2.0 * constants::fe3_spin * spin_count(p.sphere_diameter);
    v.rabi = wp.rabi;
    v.kerr_coeff = p.sphere_diameter > 0.0 ? kerr_coefficient(p.sphere_diameter) : 0.0;
    v.kerr_drive = v.kerr_coeff * amp * amp * amp;

    if (v.magnon_number == 0.0) {
        v.low_lying_ratio = 0.0;
    } else {
        v.low_lying_ratio = v.spin_bound > 0.0 ? v.magnon_number / v.spin_bound
                                               : std::numeric_limits<double>::infinity();
    }
    if (v.kerr_drive == 0.0) {
        v.kerr_ratio = 0.0;
    } else {
        v.kerr_ratio = v.rabi > 0.0 ? v.kerr_drive / v.rabi : std::numeric_limits<double>::infinity();
    }
    v.low_lying_ok = v.low_lying_ratio < ValidityReport::strict_margin;
    v.kerr_ok = v.kerr_ratio < ValidityReport::strict_margin;
    v.kerr_ok_relaxed = v.kerr_ratio < ValidityReport::relaxed_margin;
    return v;
}

} // namespace magsq
