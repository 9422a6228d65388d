#pragma once

// Evaluates a sweep grid. Points run on a small worker pool; each result is
// written to its own slot, so the table comes out in row-major order
// whatever the completion order.

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "../constants.hpp"
#include "../gaussdyn.hpp"
#include "../outputfield.hpp"
#include "../physparams.hpp"
#include "../threemode.hpp"
#include "../twomode.hpp"
#include "config.hpp"

namespace magsq::sweep {

using Cell = std::variant<std::monostate, double, bool, std::string>;
using Row = std::vector<Cell>;

struct ResultTable {
    SweepConfig config;
    std::vector<std::string> columns;
    std::vector<Row> rows;
};

inline constexpr std::string_view status_ok = "ok";
inline constexpr std::string_view status_unstable = "unstable";
inline constexpr std::string_view status_error = "error";

struct RunSummary {
    std::size_t ok = 0, unstable = 0, failed = 0;
};

/// Output columns of a target (after the axis columns).
inline std::vector<std::string> target_columns(Target t) {
    switch (t) {
    case Target::magnon_variances:
        return {"var_X", "var_Y", "var_x", "var_y", "var_X_dB", "var_Y_dB", "var_x_dB", "var_y_dB",
                "uncertainty_margin", "stable", "status", "message"};
    case Target::mechanical_variance:
        return {"Omega_rad_per_s", "abs_mean_magnon", "G_mb_eff_over_2pi_Hz", "N_b", "var_q_tilde",
                "var_q_tilde_dB", "var_p_tilde", "var_q_cycle_mean", "var_q_cycle_min", "var_q_lab", "var_p_lab",
                "stable", "status", "message"};
    case Target::output_spectrum:
        return {"omega_rad_per_s", "S", "S_dB", "stable", "status", "message"};
    case Target::validity:
        return {"Omega_rad_per_s", "abs_mean_magnon", "G_mb_eff_over_2pi_Hz", "magnon_number", "spin_bound",
                "low_lying_ratio", "kerr_drive_rad_per_s", "kerr_ratio", "low_lying_ok", "kerr_ok",
                "kerr_ok_relaxed", "status", "message"};
    }
    return {};
}

namespace detail {

inline Cell db_or_empty(double v) { return v > 0.0 ? Cell{squeezing_db(v)} : Cell{}; }

inline WorkingPoint resolve_working_point(const PointSpec& p, const SystemParams& s) {
    using constants::angular;
    const double da = angular(p.delta_a);
    const double dm = angular(p.delta_m);
    switch (p.drive_mode) {
    case MagnonDriveMode::rabi: return working_point(s, p.rabi, da, dm, p.detuning_mode);
    case MagnonDriveMode::field:
        return working_point(s, rabi_frequency(p.b0, spin_count(p.diameter)), da, dm, p.detuning_mode);
    case MagnonDriveMode::target_coupling:
        if (p.detuning_mode != DetuningMode::effective)
            throw UsageError("target_coupling needs detuning.mode = effective");
        return working_point_for_coupling(s, angular(p.coupling), da, dm);
    }
    throw UsageError("unknown magnon drive mode");
}

inline Row fail_row(std::size_t ncols, std::string_view status, const std::string& message, bool stable) {
    Row r(ncols);
    r[ncols - 3] = stable;
    r[ncols - 2] = std::string(status);
    r[ncols - 1] = message;
    return r;
}

inline Row magnon_row(const PointSpec& p) {
    using constants::angular;
    const auto s = system_params(p);
    const auto sys = build_two_mode(s, squeezed_drive(p), angular(p.delta_a), angular(p.delta_m));
    if (!stability(sys.model).stable) return fail_row(12, status_unstable, "drift matrix not stable", false);
    const auto cov = lyapunov_steady_state(sys.model, sys.diffusion);
    Row r;
    for (int k : {X, Y, x, y}) r.emplace_back(cov.variance(k));
    for (int k : {X, Y, x, y}) r.push_back(db_or_empty(cov.variance(k)));
    r.emplace_back(cov.uncertainty_margin());
    r.emplace_back(true);
    const bool physical = cov.symmetric() && cov.positive_definite() && cov.satisfies_uncertainty();
    r.emplace_back(std::string(physical ? status_ok : status_error));
    r.emplace_back(std::string(physical ? "" : "covariance violates the uncertainty relation"));
    return r;
}

inline Row mechanical_row(const PointSpec& p) {
    const auto s = system_params(p);
    const auto wp = resolve_working_point(p, s);
    const auto drive = squeezed_drive(p);
    const auto sys = build_three_mode(s, drive, wp);
    Row r;
    r.emplace_back(wp.rabi);
    r.emplace_back(std::abs(wp.mean_magnon));
    r.emplace_back(constants::ordinary(wp.drift_coupling()));
    r.emplace_back(sys.model.bath.phonon_occupation);
    if (!stability(sys.model).stable) {
        r.resize(14);
        r[11] = false;
        r[12] = std::string(status_unstable);
        r[13] = std::string("drift matrix not stable");
        return r;
    }
    const bool sideband = std::abs(drive.detuning_s - s.mech_freq) <= 1e-12 * s.mech_freq;
    if (sideband) {
        const auto res = interaction_picture_variance(sys);
        r.emplace_back(res.var_q_tilde);
        r.push_back(db_or_empty(res.var_q_tilde));
        r.emplace_back(res.var_p_tilde);
        r.emplace_back(res.var_q_mean);
        r.emplace_back(res.var_q_min);
        r.emplace_back(res.harmonics.stationary(0, 0));
        r.emplace_back(res.harmonics.stationary(1, 1));
    } else {
        // Interaction-picture figures need Delta_s = omega_b; report the
        // cycle-averaged lab-frame block only.
        const auto h = frequency_domain_mechanics(sys);
        for (int k = 0; k < 5; ++k) r.emplace_back(std::monostate{});
        r.emplace_back(h.stationary(0, 0));
        r.emplace_back(h.stationary(1, 1));
    }
    r.emplace_back(true);
    r.emplace_back(std::string(status_ok));
    r.emplace_back(std::string(sideband ? "" : "Delta_s != omega_b: interaction-picture columns left empty"));
    return r;
}

inline Row spectrum_row(const PointSpec& p) {
    using constants::angular;
    const auto s = system_params(p);
    const double da = angular(p.delta_a), dm = angular(p.delta_m), w = angular(p.omega);
    const auto sys = build_two_mode(s, squeezed_drive(p), da, dm);
    Row r;
    r.emplace_back(w);
    if (!stability(sys.model).stable) {
        r.resize(6);
        r[3] = false;
        r[4] = std::string(status_unstable);
        r[5] = std::string("drift matrix not stable");
        return r;
    }
    const double v = output_spectrum_value(output_coefficients(s, da, dm, w, p.phi),
                                           output_coefficients(s, da, dm, -w, p.phi), sys.model.correlations);
    r.emplace_back(v);
    r.push_back(db_or_empty(v));
    r.emplace_back(true);
    r.emplace_back(std::string(v >= 0.0 ? status_ok : status_error));
    r.emplace_back(std::string(v >= 0.0 ? "" : "negative spectrum"));
    return r;
}

inline Row validity_row(const PointSpec& p) {
    const auto s = system_params(p);
    const auto wp = resolve_working_point(p, s);
    const auto v = validity_report(s, wp);
    Row r;
    r.emplace_back(wp.rabi);
    r.emplace_back(std::abs(wp.mean_magnon));
    r.emplace_back(constants::ordinary(wp.drift_coupling()));
    r.emplace_back(v.magnon_number);
    r.emplace_back(v.spin_bound);
    r.emplace_back(v.low_lying_ratio);
    r.emplace_back(v.kerr_drive);
    r.emplace_back(v.kerr_ratio);
    r.emplace_back(v.low_lying_ok);
    r.emplace_back(v.kerr_ok);
    r.emplace_back(v.kerr_ok_relaxed);
    r.emplace_back(std::string(status_ok));
    r.emplace_back(std::string());
    return r;
}

} // namespace detail

/// Output cells for one grid point. Failures become a status, never a throw.
inline Row evaluate_point(const PointSpec& p, Target t) {
    const std::size_t n = target_columns(t).size();
    // Validity rows have no "stable" column.
    auto failed = [&](std::string_view status, const std::string& msg, bool stable) {
        Row r(n);
        r[n - 2] = std::string(status);
        r[n - 1] = msg;
        if (t != Target::validity) r[n - 3] = stable;
        return r;
    };
    try {
        validate_point(p, t);
        switch (t) {
        case Target::magnon_variances: return detail::magnon_row(p);
        case Target::mechanical_variance: return detail::mechanical_row(p);
        case Target::output_spectrum: return detail::spectrum_row(p);
        case Target::validity: return detail::validity_row(p);
        }
    } catch (const StabilityError& e) {
        return failed(status_unstable, e.what(), false);
    } catch (const std::exception& e) {
        return failed(status_error, e.what(), true);
    }
    return failed(status_error, "unknown target", true);
}

struct RunOptions {
    unsigned jobs = 1;  // 0 = hardware concurrency
    // Called from worker threads.
    std::function<void(std::size_t done, std::size_t total)> progress;
};

inline ResultTable run_sweep(const SweepConfig& cfg, const RunOptions& opt = {}) {
    validate_config(cfg);
    ResultTable table;
    table.config = cfg;
    for (const auto& a : cfg.axes) table.columns.push_back(a.name);
    for (auto& c : target_columns(cfg.target)) table.columns.push_back(std::move(c));

    const std::size_t n = cfg.grid_size();
    table.rows.resize(n);
    std::atomic<std::size_t> next{0}, done{0};

    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            const auto p = cfg.point(i);
            Row row;
            for (const auto& a : cfg.axes) row.emplace_back(p.*(find_parameter(a.name)->field));
            for (auto& c : evaluate_point(p, cfg.target)) row.push_back(std::move(c));
            table.rows[i] = std::move(row);
            const auto d = ++done;
            if (opt.progress) opt.progress(d, n);
        }
    };

    unsigned jobs = opt.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.jobs;
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(work);
    }
    return table;
}

inline RunSummary summarize(const ResultTable& t) {
    RunSummary s;
    const std::size_t col = t.columns.size() - 2;
    for (const auto& r : t.rows) {
        const auto* st = std::get_if<std::string>(&r[col]);
        if (st && *st == status_ok) ++s.ok;
        else if (st && *st == status_unstable) ++s.unstable;
        else ++s.failed;
    }
    return s;
}

} // namespace magsq::sweep
