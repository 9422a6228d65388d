#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature for vector-valued
// integrands. Each evaluation of the spectral integrands costs a few small
// complex matrix inversions, so every component shares the same nodes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace magsq {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 20000;
};

template <std::size_t K>
struct QuadratureResult {
    std::array<double, K> value{};
    double error = 0.0;  // summed Kronrod-Gauss estimate, max over components
    long evaluations = 0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

template <std::size_t K>
struct Panel {
    double lo, hi;
    std::array<double, K> value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <std::size_t K, class F>
Panel<K> gauss_kronrod_panel(F& f, double lo, double hi) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    using g7 = boost::math::quadrature::gauss<double, 7>;
    const auto& nodes = gk::abscissa();   // 0, ..., ascending
    const auto& wk = gk::weights();
    const auto& wg = g7::weights();       // Gauss nodes sit at even Kronrod indices

    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<double, K> kron{}, gauss{};

    auto accumulate = [&](const std::array<double, K>& v, std::size_t idx) {
        for (std::size_t c = 0; c < K; ++c) {
            kron[c] += wk[idx] * v[c];
            if (idx % 2 == 0) gauss[c] += wg[idx / 2] * v[c];
        }
    };
    accumulate(f(mid), 0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double dx = half * nodes[i];
        const auto left = f(mid - dx);
        const auto right = f(mid + dx);
        for (std::size_t c = 0; c < K; ++c) {
            const double s = left[c] + right[c];
            kron[c] += wk[i] * s;
            if (i % 2 == 0) gauss[c] += wg[i / 2] * s;
        }
    }
    Panel<K> p{lo, hi, {}, 0.0};
    for (std::size_t c = 0; c < K; ++c) {
        p.value[c] = half * kron[c];
        p.error = std::max(p.error, std::abs(half * (kron[c] - gauss[c])));
    }
    return p;
}

} // namespace detail

/// Integrates f over [breaks.front(), breaks.back()], starting from the
/// panels delimited by `breaks` (sorted, at least two entries) and bisecting
/// the panel with the largest error until the summed error falls below
/// max(abs_tol, rel_tol * max_c |I_c|).
template <std::size_t K, class F>
QuadratureResult<K> integrate_adaptive(F&& f, std::span<const double> breaks, const QuadratureOptions& opt = {}) {
    if (breaks.size() < 2) throw InvalidParameter("integrate_adaptive: need at least two break points");
    QuadratureResult<K> res;
    std::priority_queue<detail::Panel<K>> heap;
    long evals = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        heap.push(detail::gauss_kronrod_panel<K>(f, breaks[i], breaks[i + 1]));
        evals += 15;
    }
    if (heap.empty()) throw InvalidParameter("integrate_adaptive: empty integration range");

    auto totals = [&](std::array<double, K>& sum, double& err) {
        sum.fill(0.0);
        err = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            const auto& p = copy.top();
            for (std::size_t c = 0; c < K; ++c) sum[c] += p.value[c];
            err += p.error;
            copy.pop();
        }
    };

    std::array<double, K> sum{};
    double err = 0.0;
    totals(sum, err);
    // Running totals are updated incrementally; `totals` re-syncs them
    // occasionally to stop rounding drift.
    int since_sync = 0;
    while (true) {
        double mag = 0.0;
        for (double v : sum) mag = std::max(mag, std::abs(v));
        if (err <= std::max(opt.abs_tol, opt.rel_tol * mag)) {
            res.converged = true;
            break;
        }
        if (static_cast<int>(heap.size()) >= opt.max_intervals) break;
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            heap.push(worst);
            break;  // cannot bisect further in double precision
        }
        auto left = detail::gauss_kronrod_panel<K>(f, worst.lo, mid);
        auto right = detail::gauss_kronrod_panel<K>(f, mid, worst.hi);
        evals += 30;
        for (std::size_t c = 0; c < K; ++c) sum[c] += left.value[c] + right.value[c] - worst.value[c];
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (++since_sync == 200) {
            totals(sum, err);
            since_sync = 0;
        }
    }
    totals(sum, err);
    res.value = sum;
    res.error = err;
    res.evaluations = evals;
    res.intervals = static_cast<int>(heap.size());
    return res;
}

/// Break points that resolve a set of Lorentzian-like peaks inside [lo, hi]:
/// each centre plus geometrically spaced offsets of its half width.
inline std::vector<double> peak_breakpoints(double lo, double hi, std::span<const double> centres,
                                            std::span<const double> widths) {
    std::vector<double> pts{lo, hi};
    for (std::size_t i = 0; i < centres.size(); ++i) {
        const double c = centres[i];
        const double w = std::max(std::abs(widths[i]), 1e-12 * (hi - lo));
        pts.push_back(c);
        for (double s = 1.0; s * w < (hi - lo); s *= 4.0) {
            pts.push_back(c - s * w);
            pts.push_back(c + s * w);
        }
    }
    std::vector<double> out;
    for (double v : pts)
        if (v >= lo && v <= hi) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [&](double a, double b) { return std::abs(a - b) <= 1e-14 * (hi - lo); }),
              out.end());
    return out;
}

} // namespace magsq
