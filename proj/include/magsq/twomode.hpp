#pragma once

// Magnon squeezing by a squeezed cavity drive and the cavity-magnon
// beamsplitter interaction. Everything here lives in the frame rotating at
// the squeezed-drive frequency, where the bath correlations are stationary.

#include <cmath>

#include "gaussdyn.hpp"
#include "physparams.hpp"

namespace magsq {

/// Squeezing in dB relative to the vacuum variance 1/2; positive below vacuum.
inline double squeezing_db(double variance) {
    if (!(variance > 0.0)) throw InvalidParameter("squeezing_db: variance must be > 0");
    return -10.0 * std::log10(variance / 0.5);
}

/// Squeezing parameter r of an ideal broadband squeezed vacuum quoted in dB.
inline double squeezing_parameter_from_db(double db) {
    return std::log(std::pow(10.0, db / 20.0));
}

struct ResonantVariances {
    double cavity_y = 0.0;  // <dY^2>
    double magnon_x = 0.0;  // <dx^2>
};

/// Closed-form variances of the squeezed cavity phase and magnon amplitude
/// quadratures at Delta_a = Delta_m = 0.
inline ResonantVariances resonant_variances_analytic(double kappa_a, double kappa_m, double g_ma, double r,
                                                     double theta, double n_m) {
    if (!(kappa_a > 0.0) || !(kappa_m > 0.0)) throw InvalidParameter("resonant variances need kappa_a, kappa_m > 0");
    const double g2 = g_ma * g_ma;
    const double sq = std::cosh(2.0 * r) - std::cos(theta) * std::sinh(2.0 * r);
    const double thermal = 2.0 * n_m + 1.0;
    const double den = 2.0 * (kappa_a + kappa_m) * (g2 + kappa_a * kappa_m);
    ResonantVariances v;
    v.cavity_y = (g2 * thermal * kappa_m + kappa_a * (g2 + kappa_a * kappa_m + kappa_m * kappa_m) * sq) / den;
    v.magnon_x = (thermal * kappa_m * (g2 + kappa_a * kappa_m + kappa_a * kappa_a) + g2 * kappa_a * sq) / den;
    return v;
}

/// Magnon amplitude variance in the regime g_ma >> kappa_a >> kappa_m,
/// theta = 0, N_m = 0.
inline double optimal_magnon_variance(double r, double kappa_a, double kappa_m) {
    if (!(kappa_a > 0.0)) throw InvalidParameter("optimal_magnon_variance: kappa_a must be > 0");
    return 0.5 * (std::exp(-2.0 * r) + kappa_m / kappa_a);
}

struct QuadratureVariances {
    double cavity_x = 0.0;
    double cavity_y = 0.0;
    double magnon_x = 0.0;
    double magnon_y = 0.0;
    CovarianceMatrix<4> covariance;
};

/// Steady-state quadrature variances for arbitrary detunings (measured from
/// the squeezed-drive frequency), from the Lyapunov equation.
inline QuadratureVariances detuned_variances(const SystemParams& s, const SqueezedDrive& drive, double delta_a,
                                             double delta_m) {
    const auto sys = build_two_mode(s, drive, delta_a, delta_m);
    QuadratureVariances out;
    out.covariance = lyapunov_steady_state(sys.model, sys.diffusion);
    out.cavity_x = out.covariance.variance(X);
    out.cavity_y = out.covariance.variance(Y);
    out.magnon_x = out.covariance.variance(x);
    out.magnon_y = out.covariance.variance(y);
    return out;
}

} // namespace magsq
