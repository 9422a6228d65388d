#pragma once

// Reference computations for the tests. They reach the same quantities as
// the library by different routes (eigen-decomposition instead of Kronecker
// solves, explicit sums instead of closed forms).

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "magsq/magsq.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// Bose-Einstein occupation by long-double summation of the geometric series
/// sum_k e^{-k x} - 1 when x is large, direct form otherwise.
inline double bose(double omega, double temp) {
    const long double x = static_cast<long double>(magsq::constants::hbar) * omega /
                          (static_cast<long double>(magsq::constants::boltzmann) * temp);
    if (x > 1.0L) {
        long double s = 0.0L, term = 1.0L;
        for (int k = 1; k < 200; ++k) {
            term *= std::exp(-x);
            s += term;
            if (term < 1e-30L) break;
        }
        return static_cast<double>(s);
    }
    return static_cast<double>(1.0L / (std::exp(x) - 1.0L));
}

/// Solution of (A + i s) V + V (A + i s)^T = -D through A = S L S^{-1}:
/// V = S [ (S^{-1} D S^{-T})_ij / -(l_i + l_j + 2 i s) ] S^T.
template <int N>
Eigen::Matrix<cplx, N, N> shifted_lyapunov(const Eigen::Matrix<double, N, N>& a, const Eigen::Matrix<cplx, N, N>& d,
                                           double shift) {
    Eigen::EigenSolver<Eigen::Matrix<double, N, N>> es(a);
    const Eigen::Matrix<cplx, N, N> s = es.eigenvectors();
    const Eigen::Matrix<cplx, N, 1> l = es.eigenvalues();
    const Eigen::Matrix<cplx, N, N> si = s.inverse();
    Eigen::Matrix<cplx, N, N> w = si * d * si.transpose();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) w(i, j) /= -(l(i) + l(j) + cplx{0.0, 2.0 * shift});
    return s * w * s.transpose();
}

template <int N>
Eigen::Matrix<double, N, N> lyapunov(const Eigen::Matrix<double, N, N>& a, const Eigen::Matrix<double, N, N>& d) {
    return shifted_lyapunov<N>(a, d.template cast<cplx>(), 0.0).real();
}

/// Diffusion matrices rebuilt from the noise coupling and the channel
/// correlations: D = Re( B C B^T ) symmetrized, per harmonic.
template <int N>
Eigen::Matrix<cplx, N, N> diffusion_from_channels(const magsq::LinearModel<N>& m, const magsq::ChannelMatrix& c) {
    const Eigen::Matrix<cplx, N, N> bcb = m.noise_coupling * c * m.noise_coupling.transpose();
    return 0.5 * (bcb + bcb.transpose());
}

/// Mechanical block of the limit cycle V(t) = V0 + V+ e^{-2i s t} + c.c.
struct MechanicalCycle {
    Eigen::Matrix2d v0;
    Eigen::Matrix2cd vplus;
};

inline MechanicalCycle mechanical_cycle(const magsq::ThreeModeSystem& sys) {
    using namespace magsq;
    const auto& m = sys.model;
    const Eigen::Matrix<cplx, 6, 6> d0 = diffusion_from_channels<6>(m, m.correlations.stationary);
    const Eigen::Matrix<cplx, 6, 6> dp = diffusion_from_channels<6>(m, m.correlations.raising);
    const Eigen::Matrix<double, 6, 6> v0 = lyapunov<6>(m.drift, d0.real());
    const Eigen::Matrix<cplx, 6, 6> vp = shifted_lyapunov<6>(m.drift, dp, m.correlations.detuning_s);
    MechanicalCycle out;
    out.v0 = v0.block<2, 2>(q, q);
    out.vplus = vp.block<2, 2>(q, q);
    return out;
}

/// Maximum over one mechanical half period of the rotated q variance.
inline double rotated_q_max(const MechanicalCycle& c, double wb, double ds, int samples = 4096) {
    double best = -1e300;
    const double period = M_PI / wb;
    for (int k = 0; k < samples; ++k) {
        const double t = period * k / samples;
        const Eigen::Matrix2d lab = c.v0 + 2.0 * (c.vplus * std::polar(1.0, -2.0 * ds * t)).real();
        const double co = std::cos(wb * t), si = std::sin(wb * t);
        const double qq = co * co * lab(0, 0) - 2.0 * co * si * lab(0, 1) + si * si * lab(1, 1);
        best = std::max(best, qq);
    }
    return best;
}

} // namespace oracle
