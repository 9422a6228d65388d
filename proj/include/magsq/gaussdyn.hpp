#pragma once

// Linear quantum Langevin machinery for small Gaussian systems.
//
// Quadrature ordering is fixed everywhere as
//     (X, Y, x, y, q, p)  = (cavity, magnon, mechanics)
// with X = (a + a^dag)/sqrt2, Y = i(a^dag - a)/sqrt2 and likewise for the
// magnon. Two-mode models use the first four entries.
//
// Input noise is described in creation/annihilation form. In the frequency
// domain the channel vector is
//     nu(w) = (a_in(w), a_in^dag(-w), m_in(w), m_in^dag(-w), xi(w))
// and the quadrature noise vector is n(w) = B nu(w) with B = noise_coupling.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "physparams.hpp"

namespace magsq {

template <int N>
using RealMatrix = Eigen::Matrix<double, N, N>;
template <int N>
using ComplexMatrix = Eigen::Matrix<cplx, N, N>;

inline constexpr int noise_channels = 5;

template <int N>
using NoiseCoupling = Eigen::Matrix<cplx, N, noise_channels>;
using ChannelMatrix = Eigen::Matrix<cplx, noise_channels, noise_channels>;

enum Quadrature : int { X = 0, Y = 1, x = 2, y = 3, q = 4, p = 5 };

enum Channel : int { a_in = 0, a_in_dag = 1, m_in = 2, m_in_dag = 3, xi = 4 };

/// Frequency-domain input correlations
///   <nu_i(w) nu_j(W)> = 2 pi [ stationary_ij delta(w + W)
///                            + raising_ij    delta(w + W - 2 Delta_s)
///                            + lowering_ij   delta(w + W + 2 Delta_s) ].
/// The raising pairing carries exp(-2 i Delta_s t) in the time domain.
/// The mechanical entry holds the symmetrized value, which is all that a
/// symmetrized second moment can see.
struct NoiseCorrelations {
    ChannelMatrix stationary = ChannelMatrix::Zero();
    ChannelMatrix raising = ChannelMatrix::Zero();
    ChannelMatrix lowering = ChannelMatrix::Zero();
    double detuning_s = 0.0;
};

/// Thermal and squeezed reservoir occupations attached to a model.
struct BathState {
    BathMoments cavity;
    double detuning_s = 0.0;
    double magnon_occupation = 0.0;
    double phonon_occupation = 0.0;
};

inline NoiseCorrelations make_noise_correlations(const BathState& bath, double gamma_b) {
    NoiseCorrelations c;
    c.detuning_s = bath.detuning_s;
    c.stationary(a_in, a_in_dag) = bath.cavity.n + 1.0;
    c.stationary(a_in_dag, a_in) = bath.cavity.n;
    c.stationary(m_in, m_in_dag) = bath.magnon_occupation + 1.0;
    c.stationary(m_in_dag, m_in) = bath.magnon_occupation;
    c.stationary(xi, xi) = gamma_b * (2.0 * bath.phonon_occupation + 1.0);
    c.raising(a_in, a_in) = bath.cavity.m;
    c.lowering(a_in_dag, a_in_dag) = std::conj(bath.cavity.m);
    return c;
}

template <int N>
struct LinearModel {
    static_assert(N == 4 || N == 6, "two-mode or three-mode models only");
    static constexpr int dim = N;

    RealMatrix<N> drift = RealMatrix<N>::Zero();
    NoiseCoupling<N> noise_coupling = NoiseCoupling<N>::Zero();
    NoiseCorrelations correlations;
    BathState bath;
};

/// Diffusion matrix D(t) = stationary + oscillating e^{-2i Delta_s t} + c.c.
/// For Delta_s = 0 the oscillating part is folded into `stationary`.
template <int N>
struct DiffusionMatrix {
    RealMatrix<N> stationary = RealMatrix<N>::Zero();
    ComplexMatrix<N> oscillating = ComplexMatrix<N>::Zero();
    double detuning_s = 0.0;

    bool time_dependent() const { return detuning_s != 0.0 && !oscillating.isZero(0.0); }

    RealMatrix<N> at(double t) const {
        if (!time_dependent()) return stationary;
        const cplx phase = std::polar(1.0, -2.0 * detuning_s * t);
        return stationary + 2.0 * (oscillating * phase).real();
    }
};

template <int N>
struct CovarianceMatrix {
    RealMatrix<N> v = RealMatrix<N>::Zero();

    double variance(int i) const { return v(i, i); }

    bool symmetric(double tol = 1e-12) const {
        return (v - v.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, v.cwiseAbs().maxCoeff());
    }

    bool positive_definite() const {
        Eigen::LLT<RealMatrix<N>> llt(0.5 * (v + v.transpose()));
        return llt.info() == Eigen::Success;
    }

    /// Smallest eigenvalue of V + (i/2) Omega; non-negative for a physical state.
    double uncertainty_margin() const {
        ComplexMatrix<N> h = (0.5 * (v + v.transpose())).template cast<cplx>();
        for (int k = 0; k < N; k += 2) {
            h(k, k + 1) += cplx{0.0, 0.5};
            h(k + 1, k) -= cplx{0.0, 0.5};
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix<N>> es(h, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    bool satisfies_uncertainty(double tol = 1e-9) const {
        return uncertainty_margin() >= -tol * std::max(1.0, v.cwiseAbs().maxCoeff());
    }

    /// V_QQ V_PP - V_QP^2 for the given mode (0 cavity, 1 magnon, 2 mechanics).
    double mode_determinant(int mode) const {
        const int k = 2 * mode;
        return v(k, k) * v(k + 1, k + 1) - v(k, k + 1) * v(k + 1, k);
    }
};

template <int N>
CovarianceMatrix<N> vacuum_covariance() {
    return {0.5 * RealMatrix<N>::Identity()};
}

// ---------------------------------------------------------------------------
// Model builders

namespace detail {

template <int N>
NoiseCoupling<N> quadrature_noise_coupling(double kappa_a, double kappa_m) {
    NoiseCoupling<N> b = NoiseCoupling<N>::Zero();
    const double sa = std::sqrt(kappa_a);
    const double sm = std::sqrt(kappa_m);
    const cplx i{0.0, 1.0};
    b(X, a_in) = sa;
    b(X, a_in_dag) = sa;
    b(Y, a_in) = -i * sa;
    b(Y, a_in_dag) = i * sa;
    b(x, m_in) = sm;
    b(x, m_in_dag) = sm;
    b(y, m_in) = -i * sm;
    b(y, m_in_dag) = i * sm;
    if constexpr (N == 6) b(p, xi) = 1.0;
    return b;
}

template <int N>
void fill_cavity_magnon_drift(RealMatrix<N>& a, const SystemParams& s, double delta_a, double delta_m) {
    a(X, X) = -s.kappa_a;
    a(X, Y) = delta_a;
    a(X, y) = s.g_ma;
    a(Y, X) = -delta_a;
    a(Y, Y) = -s.kappa_a;
    a(Y, x) = -s.g_ma;
    a(x, Y) = s.g_ma;
    a(x, x) = -s.kappa_m;
    a(x, y) = delta_m;
    a(y, X) = -s.g_ma;
    a(y, x) = -delta_m;
    a(y, y) = -s.kappa_m;
}

template <int N>
DiffusionMatrix<N> make_diffusion(const SystemParams& s, const BathState& bath) {
    DiffusionMatrix<N> d;
    d.detuning_s = bath.detuning_s;
    const double n = bath.cavity.n;
    const cplx m = bath.cavity.m;
    d.stationary(X, X) = s.kappa_a * (2.0 * n + 1.0);
    d.stationary(Y, Y) = s.kappa_a * (2.0 * n + 1.0);
    d.stationary(x, x) = s.kappa_m * (2.0 * bath.magnon_occupation + 1.0);
    d.stationary(y, y) = s.kappa_m * (2.0 * bath.magnon_occupation + 1.0);
    if constexpr (N == 6) d.stationary(p, p) = s.gamma_b * (2.0 * bath.phonon_occupation + 1.0);

    const cplx i{0.0, 1.0};
    ComplexMatrix<N> osc = ComplexMatrix<N>::Zero();
    osc(X, X) = s.kappa_a * m;
    osc(X, Y) = -i * s.kappa_a * m;
    osc(Y, X) = -i * s.kappa_a * m;
    osc(Y, Y) = -s.kappa_a * m;
    if (bath.detuning_s == 0.0) {
        d.stationary += 2.0 * osc.real();
    } else {
        d.oscillating = osc;
    }
    return d;
}

inline double magnon_occupation(const SystemParams& s) {
    return s.temperature > 0.0 ? thermal_occupation(s.magnon_freq, s.temperature) : 0.0;
}

} // namespace detail

template <int N>
struct ModelWithDiffusion {
    LinearModel<N> model;
    DiffusionMatrix<N> diffusion;
};

using TwoModeSystem = ModelWithDiffusion<4>;
using ThreeModeSystem = ModelWithDiffusion<6>;

/// Cavity + magnon fluctuations in the frame rotating at the squeezed-drive
/// frequency; detunings are measured from omega_s, so the bath is stationary.
inline TwoModeSystem build_two_mode(const SystemParams& s, const SqueezedDrive& drive, double delta_a,
                                    double delta_m) {
    s.validate(true);
    TwoModeSystem sys;
    sys.model.bath.cavity = squeezed_noise_moments(drive);
    sys.model.bath.detuning_s = 0.0;
    sys.model.bath.magnon_occupation = detail::magnon_occupation(s);
    detail::fill_cavity_magnon_drift<4>(sys.model.drift, s, delta_a, delta_m);
    sys.model.noise_coupling = detail::quadrature_noise_coupling<4>(s.kappa_a, s.kappa_m);
    sys.model.correlations = make_noise_correlations(sys.model.bath, 0.0);
    sys.diffusion = detail::make_diffusion<4>(s, sys.model.bath);
    return sys;
}

/// Linearized photon-magnon-phonon fluctuations about the driven working
/// point, in the frame rotating at the magnon drive frequency omega_0.
/// The squeezed-bath correlations oscillate at 2 Delta_s in this frame.
inline ThreeModeSystem build_three_mode(const SystemParams& s, const SqueezedDrive& drive,
                                        const WorkingPoint& wp) {
    s.validate(true);
    if (!(s.mech_freq > 0.0)) throw InvalidParameter("three-mode model needs mech_freq > 0");
    ThreeModeSystem sys;
    auto& m = sys.model;
    m.bath.cavity = squeezed_noise_moments(drive);
    m.bath.detuning_s = drive.detuning_s;
    m.bath.magnon_occupation = detail::magnon_occupation(s);
    m.bath.phonon_occupation = s.temperature > 0.0 ? thermal_occupation(s.mech_freq, s.temperature) : 0.0;

    detail::fill_cavity_magnon_drift<6>(m.drift, s, wp.detuning_a, wp.eff_detuning_m);
    const double g = wp.drift_coupling();
    m.drift(x, q) = -g;
    m.drift(q, p) = s.mech_freq;
    m.drift(p, y) = g;
    m.drift(p, q) = -s.mech_freq;
    m.drift(p, p) = -s.gamma_b;

    m.noise_coupling = detail::quadrature_noise_coupling<6>(s.kappa_a, s.kappa_m);
    m.correlations = make_noise_correlations(m.bath, s.gamma_b);
    sys.diffusion = detail::make_diffusion<6>(s, m.bath);
    return sys;
}

// ---------------------------------------------------------------------------
// Spectral and stability analysis

struct StabilityReport {
    bool stable = false;
    double max_real = 0.0;
    std::vector<cplx> eigenvalues;
};

/// Stable iff every eigenvalue has real part below -1e-9 max|lambda|.
template <int N>
StabilityReport stability(const LinearModel<N>& model) {
    Eigen::EigenSolver<RealMatrix<N>> es(model.drift, false);
    StabilityReport r;
    double max_abs = 0.0;
    r.max_real = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < N; ++k) {
        const cplx ev = es.eigenvalues()(k);
        r.eigenvalues.push_back(ev);
        r.max_real = std::max(r.max_real, ev.real());
        max_abs = std::max(max_abs, std::abs(ev));
    }
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(),
              [](cplx a, cplx b) { return a.imag() < b.imag() || (a.imag() == b.imag() && a.real() < b.real()); });
    r.stable = max_abs > 0.0 && r.max_real < -1e-9 * max_abs;
    return r;
}

/// T(w) = (-i w I - A)^{-1}, the response of the quadratures to the noise
/// vector with the convention u(t) = (1/2pi) Int u(w) e^{-i w t} dw.
template <int N>
ComplexMatrix<N> transfer_matrix(const LinearModel<N>& model, double omega) {
    ComplexMatrix<N> m = -model.drift.template cast<cplx>();
    m.diagonal().array() += cplx{0.0, -omega};
    Eigen::PartialPivLU<ComplexMatrix<N>> lu(m);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) throw NumericalError("transfer_matrix: (-i w - A) is singular");
    return lu.inverse();
}

// ---------------------------------------------------------------------------
// Steady state

/// Solves A V + V A^T = -D by Kronecker vectorization.
template <int N>
CovarianceMatrix<N> lyapunov_steady_state(const LinearModel<N>& model, const DiffusionMatrix<N>& diff) {
    if (diff.time_dependent())
        throw InvalidParameter("lyapunov_steady_state: diffusion matrix is time dependent");
    const auto st = stability(model);
    if (!st.stable) throw StabilityError("lyapunov_steady_state: drift matrix is not stable");

    constexpr int K = N * N;
    using Kron = Eigen::Matrix<double, K, K>;
    const RealMatrix<N> id = RealMatrix<N>::Identity();
    Kron op = Kron::Zero();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            // vec(AV) = (I (x) A) vec V ; vec(V A^T) = (A (x) I) vec V
            op.template block<N, N>(i * N, j * N) += id(i, j) * model.drift;
            op.template block<N, N>(i * N, j * N) += model.drift(i, j) * id;
        }
    Eigen::Matrix<double, K, 1> rhs = -Eigen::Map<const Eigen::Matrix<double, K, 1>>(diff.stationary.data());
    Eigen::FullPivLU<Kron> lu(op);
    if (!lu.isInvertible()) throw NumericalError("lyapunov_steady_state: singular Kronecker system");
    Eigen::Matrix<double, K, 1> sol = lu.solve(rhs);

    CovarianceMatrix<N> cm;
    cm.v = Eigen::Map<RealMatrix<N>>(sol.data());
    cm.v = 0.5 * (cm.v + cm.v.transpose()).eval();

    const double scale = diff.stationary.cwiseAbs().maxCoeff();
    if (scale > 0.0) {
        const RealMatrix<N> res = model.drift * cm.v + cm.v * model.drift.transpose() + diff.stationary;
        if (res.cwiseAbs().maxCoeff() / scale > 1e-10)
            throw NumericalError("lyapunov_steady_state: residual above 1e-10");
    }
    return cm;
}

template <int N>
double lyapunov_residual(const LinearModel<N>& model, const DiffusionMatrix<N>& diff, const CovarianceMatrix<N>& cm) {
    const RealMatrix<N> res = model.drift * cm.v + cm.v * model.drift.transpose() + diff.stationary;
    const double scale = diff.stationary.cwiseAbs().maxCoeff();
    return scale > 0.0 ? res.cwiseAbs().maxCoeff() / scale : res.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Time-domain propagation

/// One classical RK4 step of dV/dt = A V + V A^T + D(t).
template <int N>
RealMatrix<N> rk4_covariance_step(const RealMatrix<N>& a, const DiffusionMatrix<N>& diff, const RealMatrix<N>& v,
                                  double t, double h) {
    auto rhs = [&](const RealMatrix<N>& m, double tt) -> RealMatrix<N> {
        return a * m + m * a.transpose() + diff.at(tt);
    };
    const RealMatrix<N> k1 = rhs(v, t);
    const RealMatrix<N> k2 = rhs(v + 0.5 * h * k1, t + 0.5 * h);
    const RealMatrix<N> k3 = rhs(v + 0.5 * h * k2, t + 0.5 * h);
    const RealMatrix<N> k4 = rhs(v + h * k3, t + h);
    return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Largest step that resolves every drift eigenvalue and the bath oscillation.
template <int N>
double recommended_step(const LinearModel<N>& model, const DiffusionMatrix<N>& diff) {
    double fastest = 2.0 * std::abs(diff.detuning_s);
    for (const cplx ev : stability(model).eigenvalues) fastest = std::max(fastest, std::abs(ev));
    if (fastest == 0.0) throw InvalidParameter("recommended_step: model has no dynamics");
    return 0.02 / fastest;
}

struct PropagationOptions {
    double t_end = 0.0;
    double dt = 0.0;
    int record_every = 1;
    double tolerance = 1e-8;  // step-halving mismatch, relative to max|V|
};

template <int N>
struct Trajectory {
    std::vector<double> times;
    std::vector<RealMatrix<N>> states;

    const RealMatrix<N>& final_state() const { return states.back(); }
};

/// Fixed-step RK4 integration of the covariance equation of motion. Each
/// step is compared against two half steps; a mismatch above `tolerance`
/// raises AccuracyError. The half-step result is kept.
template <int N>
Trajectory<N> propagate_covariance(const LinearModel<N>& model, const DiffusionMatrix<N>& diff,
                                   const CovarianceMatrix<N>& v0, const PropagationOptions& opt) {
    if (!(opt.dt > 0.0) || !(opt.t_end >= 0.0))
        throw InvalidParameter("propagate_covariance: need dt > 0 and t_end >= 0");
    const int record = std::max(1, opt.record_every);
    const auto steps = static_cast<long>(std::ceil(opt.t_end / opt.dt - 1e-9));
    const double h = steps > 0 ? opt.t_end / static_cast<double>(steps) : 0.0;

    Trajectory<N> traj;
    RealMatrix<N> v = v0.v;
    traj.times.push_back(0.0);
    traj.states.push_back(v);
    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const RealMatrix<N> full = rk4_covariance_step<N>(model.drift, diff, v, t, h);
        const RealMatrix<N> half = rk4_covariance_step<N>(
            model.drift, diff, rk4_covariance_step<N>(model.drift, diff, v, t, 0.5 * h), t + 0.5 * h, 0.5 * h);
        const double scale = std::max(half.cwiseAbs().maxCoeff(), 1e-300);
        if ((full - half).cwiseAbs().maxCoeff() > opt.tolerance * scale)
            throw AccuracyError("propagate_covariance: step size too large for the requested accuracy");
        v = half;
        if ((k + 1) % record == 0 || k + 1 == steps) {
            traj.times.push_back(static_cast<double>(k + 1) * h);
            traj.states.push_back(v);
        }
    }
    return traj;
}

} // namespace magsq
