#pragma once

// Squeezing spectrum of the field leaving the cavity, the measurable witness
// of magnon squeezing. Works in the two-mode frame rotating at the squeezed
// drive frequency, where the bath is stationary.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "gaussdyn.hpp"
#include "physparams.hpp"

namespace magsq {

struct SpectrumTrace {
    std::string quadrature;      // e.g. "Z(phi)" or "Y"
    double phase = 0.0;          // homodyne phase phi
    std::vector<double> omega;   // rad/s, ascending
    std::vector<double> values;  // S(omega), vacuum = 1/2
};

/// Coefficients of dZ_out(w) on (a_in(w), a_in^dag(-w), m_in(w), m_in^dag(-w)).
struct OutputCoefficients {
    cplx a, b, c, d;
};

/// Closed forms for the output quadrature Z_phi = (a_out e^{-i phi} + a_out^dag e^{i phi}) / sqrt2.
inline OutputCoefficients output_coefficients(const SystemParams& s, double delta_a, double delta_m, double omega,
                                              double phi) {
    const cplx i{0.0, 1.0};
    const double g2 = s.g_ma * s.g_ma;
    const cplx am{delta_m - omega, -s.kappa_m};  // Delta_m - i kappa_m - w
    const cplx aa{delta_a - omega, -s.kappa_a};
    const cplx pm{delta_m + omega, s.kappa_m};   // Delta_m + i kappa_m + w
    const cplx pa{delta_a + omega, s.kappa_a};
    const cplx den_minus = g2 - aa * am;
    const cplx den_plus = g2 - pa * pm;
    const cplx e_minus = std::polar(1.0, -phi);
    const cplx e_plus = std::polar(1.0, phi);
    const double root2 = std::sqrt(2.0);
    const double cross = s.g_ma * std::sqrt(2.0 * s.kappa_a * s.kappa_m);

    OutputCoefficients c;
    c.a = e_minus / root2 * (-1.0 + 2.0 * i * s.kappa_a * am / den_minus);
    c.b = e_plus / root2 * (-1.0 - 2.0 * i * s.kappa_a * pm / den_plus);
    c.c = -e_minus * i * cross / den_minus;
    c.d = e_plus * i * cross / den_plus;
    return c;
}

/// Same coefficients from the transfer matrix of the two-mode model and the
/// input-output relation a_out = sqrt(2 kappa_a) a - a_in.
inline OutputCoefficients output_coefficients_generic(const TwoModeSystem& sys, double kappa_a, double omega,
                                                      double phi) {
    const auto rows = transfer_matrix(sys.model, omega) * sys.model.noise_coupling;
    const cplx i{0.0, 1.0};
    const double root2 = std::sqrt(2.0);
    Eigen::Matrix<cplx, 1, noise_channels> a_row = (rows.row(X) + i * rows.row(Y)) / root2;
    Eigen::Matrix<cplx, 1, noise_channels> adag_row = (rows.row(X) - i * rows.row(Y)) / root2;
    Eigen::Matrix<cplx, 1, noise_channels> out = std::sqrt(2.0 * kappa_a) * a_row;
    Eigen::Matrix<cplx, 1, noise_channels> out_dag = std::sqrt(2.0 * kappa_a) * adag_row;
    out(a_in) -= 1.0;
    out_dag(a_in_dag) -= 1.0;
    const Eigen::Matrix<cplx, 1, noise_channels> z =
        (std::polar(1.0, -phi) * out + std::polar(1.0, phi) * out_dag) / root2;
    return {z(a_in), z(a_in_dag), z(m_in), z(m_in_dag)};
}

namespace detail {

inline Eigen::Matrix<cplx, 1, noise_channels> as_row(const OutputCoefficients& c) {
    Eigen::Matrix<cplx, 1, noise_channels> r;
    r << c.a, c.b, c.c, c.d, 0.0;
    return r;
}

} // namespace detail

/// Symmetrized output spectrum at one frequency given the coefficients at
/// +w and -w. The bath is stationary here, so every pairing fires at W = -w.
inline double output_spectrum_value(const OutputCoefficients& at_omega, const OutputCoefficients& at_minus,
                                    const NoiseCorrelations& corr) {
    const auto zw = detail::as_row(at_omega);
    const auto zm = detail::as_row(at_minus);
    const ChannelMatrix c = corr.stationary + corr.raising + corr.lowering;
    const cplx forward = (zw * c * zm.transpose())(0, 0);
    const cplx backward = (zm * c * zw.transpose())(0, 0);
    return 0.5 * (forward + backward).real();
}

inline SpectrumTrace output_spectrum(const SystemParams& s, const SqueezedDrive& drive, double delta_a,
                                     double delta_m, const std::vector<double>& grid, double phi) {
    const auto sys = build_two_mode(s, drive, delta_a, delta_m);
    SpectrumTrace t;
    t.quadrature = "Z";
    t.phase = phi;
    t.omega = grid;
    t.values.reserve(grid.size());
    for (double w : grid) {
        const auto cw = output_coefficients(s, delta_a, delta_m, w, phi);
        const auto cm = output_coefficients(s, delta_a, delta_m, -w, phi);
        t.values.push_back(output_spectrum_value(cw, cm, sys.model.correlations));
    }
    return t;
}

/// Local extrema of a sampled spectrum, refined by a parabola through the
/// three samples around each discrete extremum. Precision is limited by the
/// grid spacing. A trace whose total variation is at rounding level has none.
inline std::vector<double> find_spectrum_features(const SpectrumTrace& trace) {
    std::vector<double> out;
    const auto& v = trace.values;
    const auto& w = trace.omega;
    if (v.size() < 3 || w.size() != v.size()) return out;
    double lo = v[0], hi = v[0], mag = 0.0;
    for (double e : v) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
        mag = std::max(mag, std::abs(e));
    }
    const double floor = 1e-9 * std::max(hi - lo, 0.0);
    if (hi - lo <= 1e-12 * std::max(mag, 1e-300)) return out;

    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        const double left = v[k] - v[k - 1];
        const double right = v[k + 1] - v[k];
        const bool is_min = left < -floor && right > floor;
        const bool is_max = left > floor && right < -floor;
        if (!is_min && !is_max) continue;
        const double h_left = w[k] - w[k - 1];
        const double h_right = w[k + 1] - w[k];
        // Vertex of the parabola through the three samples (non-uniform spacing).
        const double d1 = left / h_left;
        const double d2 = right / h_right;
        const double curvature = (d2 - d1) / (0.5 * (h_left + h_right));
        double pos = w[k];
        if (curvature != 0.0) {
            const double slope_mid = d1 + curvature * 0.5 * h_left;  // slope at w[k]
            pos = w[k] - slope_mid / curvature;
            pos = std::clamp(pos, w[k - 1], w[k + 1]);
        }
        out.push_back(pos);
    }
    return out;
}

} // namespace magsq
