#pragma once

// Mechanical squeezing in the driven three-mode system.
//
// In the frame of the magnon drive the squeezed-bath correlations oscillate
// at 2 Delta_s, so the steady state is a limit cycle rather than a fixed
// point. Second moments are therefore split into harmonics,
//     V(t) = V0 + V+ e^{-2i Delta_s t} + c.c.,
// each obtained as a frequency integral over products of transfer-matrix
// rows paired by the bath correlations. With Delta_s = omega_b the mechanical
// block is then rotated into the interaction picture of the free oscillator.
//
// limit_cycle_variance_oracle() reaches the same limit cycle by integrating
// the covariance equation of motion in time, with no frequency-domain input.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gaussdyn.hpp"
#include "physparams.hpp"
#include "quadrature.hpp"

namespace magsq {

/// Coefficients (Q_A, Q_B, Q_C, Q_D, Q_E) of
///   dQ(w) = Q_A a_in(w) + Q_B a_in^dag(-w) + Q_C m_in(w) + Q_D m_in^dag(-w) + Q_E xi(w).
using NoiseRow = std::array<cplx, noise_channels>;

template <int N>
Eigen::Matrix<cplx, N, noise_channels> response_rows(const LinearModel<N>& model, double omega) {
    return transfer_matrix(model, omega) * model.noise_coupling;
}

template <int N>
NoiseRow quadrature_noise_rows(const LinearModel<N>& model, double omega, Quadrature quad) {
    if (static_cast<int>(quad) >= N) throw InvalidParameter("quadrature not present in this model");
    const auto rows = response_rows(model, omega);
    NoiseRow out;
    for (int k = 0; k < noise_channels; ++k) out[static_cast<std::size_t>(k)] = rows(quad, k);
    return out;
}

/// Harmonic index of a bath pairing: 0 stationary, +1 carries e^{-2i Delta_s t},
/// -1 carries e^{+2i Delta_s t}.
enum class Harmonic : int { lowering = -1, stationary = 0, raising = 1 };

inline const ChannelMatrix& pairing(const NoiseCorrelations& c, Harmonic h) {
    switch (h) {
    case Harmonic::raising:
        return c.raising;
    case Harmonic::lowering:
        return c.lowering;
    default:
        return c.stationary;
    }
}

/// Frequency paired with `omega` by the delta function of harmonic h.
inline double partner_frequency(double omega, Harmonic h, double detuning_s) {
    return -omega + 2.0 * static_cast<int>(h) * detuning_s;
}

/// Symmetrized correlation density of quadratures i and j,
///   F(w) = 1/2 sum_kl [ c_ik(w) c_jl(W) + c_jk(W) c_il(w) ] C_kl,
/// with W the partner frequency. The i,j second moment at time t is
/// sum_h e^{-2 i h Delta_s t} (1/2pi) Int F_h(w) dw.
template <int N>
cplx correlation_density(const Eigen::Matrix<cplx, N, noise_channels>& at_omega,
                         const Eigen::Matrix<cplx, N, noise_channels>& at_partner, const ChannelMatrix& c, int i,
                         int j) {
    const cplx forward = (at_omega.row(i) * c * at_partner.row(j).transpose())(0, 0);
    const cplx backward = (at_partner.row(j) * c * at_omega.row(i).transpose())(0, 0);
    return 0.5 * (forward + backward);
}

// ---------------------------------------------------------------------------
// Spectral decomposition of the mechanical position

/// Position spectrum split as S_q(w) = omega_b^2 { A(w) + [B(w) e^{-2i Delta_s t} + c.c.] }.
struct SpectrumDecomposition {
    std::vector<double> grid;          // rad/s
    std::vector<double> stationary;    // A(w)
    std::vector<cplx> oscillating;     // B(w)
};

inline SpectrumDecomposition mechanical_spectrum(const ThreeModeSystem& sys, const std::vector<double>& grid) {
    const auto& m = sys.model;
    const double wb = m.drift(q, p);
    const double norm = 1.0 / (wb * wb);
    const double ds = m.correlations.detuning_s;
    SpectrumDecomposition out;
    out.grid = grid;
    for (double w : grid) {
        const auto r0 = response_rows(m, w);
        const auto rneg = response_rows(m, partner_frequency(w, Harmonic::stationary, ds));
        const auto rplus = response_rows(m, partner_frequency(w, Harmonic::raising, ds));
        out.stationary.push_back(norm * correlation_density<6>(r0, rneg, m.correlations.stationary, q, q).real());
        out.oscillating.push_back(norm * correlation_density<6>(r0, rplus, m.correlations.raising, q, q));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Harmonics of the mechanical covariance block and the interaction picture

struct CycleStats {
    double mean_q = 0.0, mean_p = 0.0;
    double max_q = 0.0, min_q = 0.0;
    double max_p = 0.0, min_p = 0.0;
    double min_uncertainty = 0.0;  // min over the cycle of det of the rotated block

    double flatness_q() const { return (max_q - min_q) / mean_q; }
};

/// Mechanical (q, p) block V(t) = V0 + V+ e^{-2i Delta_s t} + c.c.
struct MechanicalHarmonics {
    Eigen::Matrix2d stationary = Eigen::Matrix2d::Zero();
    Eigen::Matrix2cd oscillating = Eigen::Matrix2cd::Zero();
    double detuning_s = 0.0;
    double mech_freq = 0.0;

    Eigen::Matrix2d lab_frame(double t) const {
        if (detuning_s == 0.0) return stationary + 2.0 * oscillating.real();
        return stationary + 2.0 * (oscillating * std::polar(1.0, -2.0 * detuning_s * t)).real();
    }

    /// Rotated block at angle omega_b t: q~ = q cos - p sin, p~ = q sin + p cos.
    Eigen::Matrix2d interaction_frame(double t) const {
        const double c = std::cos(mech_freq * t);
        const double s = std::sin(mech_freq * t);
        Eigen::Matrix2d r;
        r << c, -s, s, c;
        return r * lab_frame(t) * r.transpose();
    }

    CycleStats cycle(int samples = 4096) const {
        CycleStats st;
        const double period = constants::pi / mech_freq;
        st.max_q = st.max_p = -std::numeric_limits<double>::infinity();
        st.min_q = st.min_p = st.min_uncertainty = std::numeric_limits<double>::infinity();
        for (int k = 0; k < samples; ++k) {
            const auto b = interaction_frame(period * k / samples);
            st.mean_q += b(0, 0) / samples;
            st.mean_p += b(1, 1) / samples;
            st.max_q = std::max(st.max_q, b(0, 0));
            st.min_q = std::min(st.min_q, b(0, 0));
            st.max_p = std::max(st.max_p, b(1, 1));
            st.min_p = std::min(st.min_p, b(1, 1));
            st.min_uncertainty = std::min(st.min_uncertainty, b.determinant());
        }
        return st;
    }
};

struct IntegrationDiagnostics {
    double omega_max = 0.0;
    double error = 0.0;
    long evaluations = 0;
    int intervals = 0;
    double tail_fraction = 0.0;  // share of the moments from |omega| > omega_max
};

struct InteractionPictureResult {
    // Headline figures: largest variance over one mechanical cycle, i.e. the
    // squeezing that holds at every phase of the residual oscillation.
    double var_q_tilde = 0.0;
    double var_p_tilde = 0.0;
    // Cycle averages, from the weighted A(w), B(w) integral.
    double var_q_mean = 0.0;
    double var_p_mean = 0.0;
    double var_q_min = 0.0;
    double var_p_min = 0.0;
    MechanicalHarmonics harmonics;
    CycleStats cycle;
    IntegrationDiagnostics diagnostics;
};

struct SpectralIntegrationOptions {
    double omega_max_factor = 200.0;
    double rel_tol = 1e-10;
    double tail_tol = 1e-3;
    int max_intervals = 40000;
};

namespace detail {

// Integrand layout for the mechanical moments.
enum MechComponent : std::size_t {
    weighted_q = 0,  // omega_b^2 { 1/2 (1+u^2) A + [1/4 (1+u)(3-u) B + c.c.] }
    weighted_p,      // same with the B term negated
    v0_qq,
    v0_pp,
    v0_qp_re,
    v0_qp_im,
    vp_qq_re,
    vp_qq_im,
    vp_pp_re,
    vp_pp_im,
    vp_qp_re,
    vp_qp_im,
    mech_components
};

using MechVector = std::array<double, mech_components>;

inline MechVector mechanical_integrand(const ThreeModeSystem& sys, double w) {
    const auto& m = sys.model;
    const auto& c = m.correlations;
    const double wb = m.drift(q, p);
    const double ds = c.detuning_s;

    const auto r0 = response_rows(m, w);
    const auto rstat = response_rows(m, partner_frequency(w, Harmonic::stationary, ds));
    const auto rplus = response_rows(m, partner_frequency(w, Harmonic::raising, ds));

    const cplx s_qq = correlation_density<6>(r0, rstat, c.stationary, q, q);
    const cplx s_pp = correlation_density<6>(r0, rstat, c.stationary, p, p);
    const cplx s_qp = correlation_density<6>(r0, rstat, c.stationary, q, p);
    const cplx b_qq = correlation_density<6>(r0, rplus, c.raising, q, q);
    const cplx b_pp = correlation_density<6>(r0, rplus, c.raising, p, p);
    const cplx b_qp = correlation_density<6>(r0, rplus, c.raising, q, p);

    const double u = w / wb;
    const double a_weight = 0.5 * (1.0 + u * u);
    const cplx b_term = 0.25 * (1.0 + u) * (3.0 - u) * b_qq;

    MechVector v{};
    v[weighted_q] = a_weight * s_qq.real() + 2.0 * b_term.real();
    v[weighted_p] = a_weight * s_qq.real() - 2.0 * b_term.real();
    v[v0_qq] = s_qq.real();
    v[v0_pp] = s_pp.real();
    v[v0_qp_re] = s_qp.real();
    v[v0_qp_im] = s_qp.imag();
    v[vp_qq_re] = b_qq.real();
    v[vp_qq_im] = b_qq.imag();
    v[vp_pp_re] = b_pp.real();
    v[vp_pp_im] = b_pp.imag();
    v[vp_qp_re] = b_qp.real();
    v[vp_qp_im] = b_qp.imag();
    return v;
}

inline double spectral_scale(const LinearModel<6>& m) {
    double s = 0.0;
    for (double v : {m.drift(q, p), m.drift(X, y), -m.drift(X, X), std::abs(m.drift(X, Y)), std::abs(m.drift(x, y)),
                     std::abs(m.correlations.detuning_s)})
        s = std::max(s, std::abs(v));
    return s;
}

inline std::vector<double> mechanical_breakpoints(const ThreeModeSystem& sys, double lo, double hi) {
    const auto st = stability(sys.model);
    const double ds = sys.model.correlations.detuning_s;
    std::vector<double> centres, widths;
    for (const cplx ev : st.eigenvalues) {
        for (double c : {-ev.imag(), ev.imag(), 2.0 * ds + ev.imag(), 2.0 * ds - ev.imag()}) {
            centres.push_back(c);
            widths.push_back(std::abs(ev.real()));
        }
    }
    return peak_breakpoints(lo, hi, centres, widths);
}

} // namespace detail

/// Frequency integrals of the mechanical second moments over
/// [-omega_max, omega_max], omega_max = factor * max(omega_b, g_ma, kappa_a,
/// |detunings|), plus the tails out to infinity. Throws if the tails carry
/// more than `tail_tol` of the headline moments.
inline std::pair<detail::MechVector, IntegrationDiagnostics>
integrate_mechanical_moments(const ThreeModeSystem& sys, const SpectralIntegrationOptions& opt = {}) {
    const auto st = stability(sys.model);
    if (!st.stable) throw StabilityError("mechanical moments: drift matrix is not stable");

    const double wmax = opt.omega_max_factor * detail::spectral_scale(sys.model);
    auto f = [&](double w) { return detail::mechanical_integrand(sys, w); };
    QuadratureOptions qo;
    qo.rel_tol = opt.rel_tol;
    qo.max_intervals = opt.max_intervals;

    const auto inner_pts = detail::mechanical_breakpoints(sys, -wmax, wmax);
    const auto inner = integrate_adaptive<detail::mech_components>(f, inner_pts, qo);
    // Tails |w| > wmax with w = wmax / t, t in (0, 1].
    auto tails = [&](double t) {
        const double w = wmax / t;
        auto a = f(w);
        const auto b = f(-w);
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = (a[k] + b[k]) * wmax / (t * t);
        return a;
    };
    const std::vector<double> unit{0.0, 1.0};
    const auto tail = integrate_adaptive<detail::mech_components>(tails, unit, qo);

    IntegrationDiagnostics diag;
    diag.omega_max = wmax;
    diag.error = inner.error + tail.error;
    diag.evaluations = inner.evaluations + tail.evaluations;
    diag.intervals = inner.intervals + tail.intervals;
    if (!inner.converged || !tail.converged)
        throw IntegrationError("mechanical moments: adaptive quadrature did not converge (error " +
                               std::to_string(diag.error) + " after " + std::to_string(diag.intervals) +
                               " panels)");

    for (std::size_t k : {detail::weighted_q, detail::weighted_p, detail::v0_qq, detail::v0_pp}) {
        const double base = std::abs(inner.value[k]);
        const double t = std::abs(tail.value[k]);
        diag.tail_fraction = std::max(diag.tail_fraction, base > 0.0 ? t / base : t);
    }
    if (diag.tail_fraction > opt.tail_tol)
        throw IntegrationError("mechanical moments: tail beyond omega_max is too large, relative size " +
                               std::to_string(diag.tail_fraction));

    detail::MechVector v = inner.value;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += tail.value[k];
    for (auto& e : v) e /= constants::two_pi;
    return {v, diag};
}

inline MechanicalHarmonics mechanical_harmonics(const ThreeModeSystem& sys, const detail::MechVector& v) {
    MechanicalHarmonics h;
    h.mech_freq = sys.model.drift(q, p);
    h.detuning_s = sys.model.correlations.detuning_s;
    h.stationary << v[detail::v0_qq], v[detail::v0_qp_re], v[detail::v0_qp_re], v[detail::v0_pp];
    const cplx qq{v[detail::vp_qq_re], v[detail::vp_qq_im]};
    const cplx pp{v[detail::vp_pp_re], v[detail::vp_pp_im]};
    const cplx qp{v[detail::vp_qp_re], v[detail::vp_qp_im]};
    h.oscillating << qq, qp, qp, pp;
    return h;
}

/// Mechanical quadrature variances in the interaction picture of the free
/// oscillator. Requires the squeezed drive to sit on the anti-Stokes
/// sideband, Delta_s = omega_b.
inline InteractionPictureResult interaction_picture_variance(const ThreeModeSystem& sys,
                                                             const SpectralIntegrationOptions& opt = {}) {
    const double wb = sys.model.drift(q, p);
    const double ds = sys.model.correlations.detuning_s;
    if (std::abs(ds - wb) > 1e-12 * wb)
        throw InvalidParameter("interaction_picture_variance: requires Delta_s = omega_b");

    const auto [v, diag] = integrate_mechanical_moments(sys, opt);
    InteractionPictureResult res;
    res.diagnostics = diag;
    res.var_q_mean = v[detail::weighted_q];
    res.var_p_mean = v[detail::weighted_p];
    res.harmonics = mechanical_harmonics(sys, v);
    res.cycle = res.harmonics.cycle();
    res.var_q_tilde = res.cycle.max_q;
    res.var_p_tilde = res.cycle.max_p;
    res.var_q_min = res.cycle.min_q;
    res.var_p_min = res.cycle.min_p;
    return res;
}

/// Lab-frame steady-state mechanical block from the frequency integrals;
/// for a stationary bath this is the Lyapunov (q, p) block.
inline MechanicalHarmonics frequency_domain_mechanics(const ThreeModeSystem& sys,
                                                      const SpectralIntegrationOptions& opt = {}) {
    return mechanical_harmonics(sys, integrate_mechanical_moments(sys, opt).first);
}

// ---------------------------------------------------------------------------
// Time-domain oracle

enum class LimitCycleMethod {
    shooting,  // one-period monodromy map, fixed point by a linear solve
    direct,    // integrate period by period from vacuum until it repeats
};

struct LimitCycleOptions {
    LimitCycleMethod method = LimitCycleMethod::shooting;
    double step_fraction = 0.01;    // dt = step_fraction / fastest rate
    double periodicity_tol = 1e-7;  // relative mismatch V(P) vs V(0)
    int samples = 2000;             // recorded points on the final cycle
};

struct LimitCycleResult {
    double var_q_mean = 0.0, var_p_mean = 0.0;
    double var_q_max = 0.0, var_q_min = 0.0;
    double var_p_max = 0.0, var_p_min = 0.0;
    double flatness = 0.0;               // (max - min) / mean of q~ over the cycle
    double periodicity_residual = 0.0;
    Eigen::Matrix2d lab_mean = Eigen::Matrix2d::Zero();  // cycle-averaged lab-frame (q, p) block
    double min_uncertainty = 0.0;
    long periods = 0;
};

namespace detail {

struct PeriodMap {
    RealMatrix<6> monodromy;  // e^{A P}
    RealMatrix<6> forced;     // V(P) starting from V(0) = 0
};

inline PeriodMap one_period_map(const ThreeModeSystem& sys, double period, int steps) {
    const double h = period / steps;
    PeriodMap pm;
    RealMatrix<6> z = RealMatrix<6>::Identity();
    const auto& a = sys.model.drift;
    for (int k = 0; k < steps; ++k) {
        const RealMatrix<6> k1 = a * z;
        const RealMatrix<6> k2 = a * (z + 0.5 * h * k1);
        const RealMatrix<6> k3 = a * (z + 0.5 * h * k2);
        const RealMatrix<6> k4 = a * (z + h * k3);
        z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    pm.monodromy = z;
    RealMatrix<6> v = RealMatrix<6>::Zero();
    for (int k = 0; k < steps; ++k) v = rk4_covariance_step<6>(a, sys.diffusion, v, k * h, h);
    pm.forced = v;
    return pm;
}

} // namespace detail

/// Limit cycle of dV/dt = A V + V A^T + D(t) with the oscillating squeezed
/// bath, found in the time domain only. Returns cycle statistics of the
/// mechanical block rotated into the interaction picture.
inline LimitCycleResult limit_cycle_variance_oracle(const ThreeModeSystem& sys, const LimitCycleOptions& opt = {}) {
    const auto st = stability(sys.model);
    if (!st.stable) throw StabilityError("limit cycle oracle: drift matrix is not stable");
    const double wb = sys.model.drift(q, p);
    const double ds = sys.diffusion.detuning_s;
    if (sys.diffusion.time_dependent() && std::abs(ds - wb) > 1e-12 * wb)
        throw InvalidParameter("limit cycle oracle: requires Delta_s = omega_b");

    const double period = constants::pi / wb;
    double fastest = 2.0 * std::abs(ds);
    double slowest = std::numeric_limits<double>::infinity();
    for (const cplx ev : st.eigenvalues) {
        fastest = std::max(fastest, std::abs(ev));
        slowest = std::min(slowest, std::abs(ev.real()));
    }
    const int steps = std::max(opt.samples, static_cast<int>(std::ceil(period * fastest / opt.step_fraction)));
    const double h = period / steps;

    LimitCycleResult res;
    RealMatrix<6> start;
    if (opt.method == LimitCycleMethod::shooting) {
        const auto pm = detail::one_period_map(sys, period, steps);
        // V = Phi V Phi^T + W  <=>  (I - Phi (x) Phi) vec V = vec W
        using Kron = Eigen::Matrix<double, 36, 36>;
        Kron op = Kron::Identity();
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) op.block<6, 6>(i * 6, j * 6) -= pm.monodromy(i, j) * pm.monodromy;
        Eigen::FullPivLU<Kron> lu(op);
        if (!lu.isInvertible()) throw ConvergenceError("limit cycle oracle: monodromy has a unit multiplier");
        Eigen::Matrix<double, 36, 1> sol = lu.solve(Eigen::Map<const Eigen::Matrix<double, 36, 1>>(pm.forced.data()));
        start = Eigen::Map<RealMatrix<6>>(sol.data());
        start = 0.5 * (start + start.transpose()).eval();
        res.periods = 1;
    } else {
        const double t_max = 1e4 / slowest;
        const long max_periods = static_cast<long>(std::ceil(t_max / period));
        RealMatrix<6> v = vacuum_covariance<6>().v;
        bool settled = false;
        for (long n = 0; n < max_periods; ++n) {
            RealMatrix<6> next = v;
            for (int k = 0; k < steps; ++k) next = rk4_covariance_step<6>(sys.model.drift, sys.diffusion, next, k * h, h);
            const double change = (next - v).cwiseAbs().maxCoeff() / next.cwiseAbs().maxCoeff();
            v = next;
            res.periods = n + 1;
            if (change < 1e-12) {
                settled = true;
                break;
            }
        }
        if (!settled) throw ConvergenceError("limit cycle oracle: no limit cycle within t_max = 1e4 / min|Re lambda|");
        start = v;
    }

    // Sweep the final cycle.
    RealMatrix<6> v = start;
    res.var_q_max = res.var_p_max = -std::numeric_limits<double>::infinity();
    res.var_q_min = res.var_p_min = res.min_uncertainty = std::numeric_limits<double>::infinity();
    for (int k = 0; k < steps; ++k) {
        const double t = k * h;
        const double c = std::cos(wb * t), s = std::sin(wb * t);
        Eigen::Matrix2d r;
        r << c, -s, s, c;
        const Eigen::Matrix2d lab = v.block<2, 2>(q, q);
        const Eigen::Matrix2d rot = r * lab * r.transpose();
        res.lab_mean += lab / steps;
        res.var_q_mean += rot(0, 0) / steps;
        res.var_p_mean += rot(1, 1) / steps;
        res.var_q_max = std::max(res.var_q_max, rot(0, 0));
        res.var_q_min = std::min(res.var_q_min, rot(0, 0));
        res.var_p_max = std::max(res.var_p_max, rot(1, 1));
        res.var_p_min = std::min(res.var_p_min, rot(1, 1));
        res.min_uncertainty = std::min(res.min_uncertainty, rot.determinant());
        v = rk4_covariance_step<6>(sys.model.drift, sys.diffusion, v, t, h);
    }
    res.periodicity_residual = (v - start).cwiseAbs().maxCoeff() / start.cwiseAbs().maxCoeff();
    if (res.periodicity_residual > opt.periodicity_tol)
        throw ConvergenceError("limit cycle oracle: trajectory is not periodic (residual " +
                               std::to_string(res.periodicity_residual) + ")");
    res.flatness = (res.var_q_max - res.var_q_min) / res.var_q_mean;
    return res;
}

} // namespace magsq
