#pragma once

// Sweep configuration: a flat "section.key = value" text format. Frequencies
// are ordinary frequencies in Hz (omega / 2 pi), temperatures in K, fields
// in T, lengths in m. Parameter names double as CSV column names.
//
//   system.kappa_a_over_2pi_Hz = 5e6
//   sweep.target = magnon_variances
//   sweep.axis1.name = r
//   sweep.axis1.min = 0
//   sweep.axis1.max = 2
//   sweep.axis1.steps = 41
//   sweep.axis2.name = T_K
//   sweep.axis2.values = 0.01, 0.1, 0.2

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "../constants.hpp"
#include "../errors.hpp"
#include "../physparams.hpp"

namespace magsq::sweep {

enum class Target { magnon_variances, mechanical_variance, output_spectrum, validity };
enum class MagnonDriveMode { rabi, field, target_coupling };
enum class Format { csv, json };

/// One grid point in configuration units.
struct PointSpec {
    double omega_a = 0.0;  // Hz
    double omega_m = 0.0;  // Hz, 0 means "same as omega_a"
    double omega_b = 0.0;
    double kappa_a = 0.0;
    double kappa_m = 0.0;
    double gamma_b = 0.0;
    double g_ma = 0.0;
    double g_mb = 0.0;
    double temperature = 0.0;  // K
    double diameter = 0.0;     // m

    double r = 0.0;
    double theta = 0.0;  // rad
    double delta_s = 0.0;

    double delta_a = 0.0;
    double delta_m = 0.0;  // effective or bare, per detuning_mode

    double rabi = 0.0;      // rad/s
    double b0 = 0.0;        // T
    double coupling = 0.0;  // target |G_mb| / 2 pi, Hz

    double phi = 0.0;    // homodyne phase, rad
    double omega = 0.0;  // analysis frequency / 2 pi, Hz

    DetuningMode detuning_mode = DetuningMode::effective;
    MagnonDriveMode drive_mode = MagnonDriveMode::rabi;
};

struct ParamDef {
    std::string_view key;  // "section.column"
    double PointSpec::*field;

    std::string_view column() const { return key.substr(key.find('.') + 1); }
};

inline const std::vector<ParamDef>& parameter_table() {
    static const std::vector<ParamDef> table = {
        {"system.omega_a_over_2pi_Hz", &PointSpec::omega_a},
        {"system.omega_m_over_2pi_Hz", &PointSpec::omega_m},
        {"system.omega_b_over_2pi_Hz", &PointSpec::omega_b},
        {"system.kappa_a_over_2pi_Hz", &PointSpec::kappa_a},
        {"system.kappa_m_over_2pi_Hz", &PointSpec::kappa_m},
        {"system.gamma_b_over_2pi_Hz", &PointSpec::gamma_b},
        {"system.g_ma_over_2pi_Hz", &PointSpec::g_ma},
        {"system.g_mb_over_2pi_Hz", &PointSpec::g_mb},
        {"system.T_K", &PointSpec::temperature},
        {"system.diameter_m", &PointSpec::diameter},
        {"drive.r", &PointSpec::r},
        {"drive.theta_rad", &PointSpec::theta},
        {"drive.Delta_s_over_2pi_Hz", &PointSpec::delta_s},
        {"detuning.Delta_a_over_2pi_Hz", &PointSpec::delta_a},
        {"detuning.Delta_m_over_2pi_Hz", &PointSpec::delta_m},
        {"magnon_drive.Omega_rad_per_s", &PointSpec::rabi},
        {"magnon_drive.B0_T", &PointSpec::b0},
        {"magnon_drive.G_mb_over_2pi_Hz", &PointSpec::coupling},
        {"spectrum.phi_rad", &PointSpec::phi},
        {"spectrum.omega_over_2pi_Hz", &PointSpec::omega},
    };
    return table;
}

/// Looks a parameter up by its full key or by its column name (case sensitive).
inline const ParamDef* find_parameter(std::string_view name) {
    for (const auto& d : parameter_table())
        if (d.key == name || d.column() == name) return &d;
    return nullptr;
}

struct Axis {
    std::string name;  // column name
    std::vector<double> values;
    // Range form, kept so the config can be written back verbatim.
    bool is_range = false;
    double min = 0.0, max = 0.0;
    int steps = 0;
};

inline std::vector<double> linspace(double lo, double hi, int steps) {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        v[static_cast<std::size_t>(i)] = i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1);
    return v;
}

inline Axis range_axis(std::string name, double lo, double hi, int steps) {
    Axis a;
    a.name = std::move(name);
    a.is_range = true;
    a.min = lo;
    a.max = hi;
    a.steps = steps;
    a.values = linspace(lo, hi, steps);
    return a;
}

inline Axis list_axis(std::string name, std::vector<double> values) {
    Axis a;
    a.name = std::move(name);
    a.values = std::move(values);
    return a;
}

struct SweepConfig {
    std::string name = "sweep";
    PointSpec base;
    std::vector<Axis> axes;  // outermost first
    Target target = Target::magnon_variances;
    std::string primary;     // column of main interest, a hint for plotting
    std::string output_path;
    Format format = Format::csv;

    std::size_t grid_size() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.values.size();
        return n;
    }

    /// Grid point `index` in row-major order (last axis fastest).
    PointSpec point(std::size_t index) const {
        PointSpec p = base;
        for (std::size_t k = axes.size(); k-- > 0;) {
            const auto& a = axes[k];
            p.*(find_parameter(a.name)->field) = a.values[index % a.values.size()];
            index /= a.values.size();
        }
        return p;
    }
};

// ---------------------------------------------------------------------------
// enum <-> text

inline std::string_view to_string(Target t) {
    switch (t) {
    case Target::magnon_variances: return "magnon_variances";
    case Target::mechanical_variance: return "mechanical_variance";
    case Target::output_spectrum: return "output_spectrum";
    case Target::validity: return "validity";
    }
    return "?";
}
inline std::string_view to_string(MagnonDriveMode m) {
    switch (m) {
    case MagnonDriveMode::rabi: return "rabi";
    case MagnonDriveMode::field: return "field";
    case MagnonDriveMode::target_coupling: return "target_coupling";
    }
    return "?";
}
inline std::string_view to_string(DetuningMode m) { return m == DetuningMode::effective ? "effective" : "bare"; }
inline std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

inline Target parse_target(std::string_view s) {
    for (Target t : {Target::magnon_variances, Target::mechanical_variance, Target::output_spectrum, Target::validity})
        if (to_string(t) == s) return t;
    throw UsageError("unknown sweep.target '" + std::string(s) +
                     "' (expected magnon_variances, mechanical_variance, output_spectrum or validity)");
}
inline MagnonDriveMode parse_drive_mode(std::string_view s) {
    for (MagnonDriveMode m : {MagnonDriveMode::rabi, MagnonDriveMode::field, MagnonDriveMode::target_coupling})
        if (to_string(m) == s) return m;
    throw UsageError("unknown magnon_drive.mode '" + std::string(s) + "' (expected rabi, field or target_coupling)");
}
inline DetuningMode parse_detuning_mode(std::string_view s) {
    if (s == "effective") return DetuningMode::effective;
    if (s == "bare") return DetuningMode::bare;
    throw UsageError("unknown detuning.mode '" + std::string(s) + "' (expected effective or bare)");
}
inline Format parse_format(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw UsageError("unknown output format '" + std::string(s) + "' (expected csv or json)");
}

// ---------------------------------------------------------------------------
// number formatting / parsing

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline double parse_double(std::string_view text, std::string_view key) {
    text = trim(text);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v))
        throw UsageError("'" + std::string(key) + "': not a finite number: '" + std::string(text) + "'");
    return v;
}

inline int parse_int(std::string_view text, std::string_view key) {
    text = trim(text);
    int v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw UsageError("'" + std::string(key) + "': not an integer: '" + std::string(text) + "'");
    return v;
}

inline std::vector<double> parse_list(std::string_view text, std::string_view key) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_double(text.substr(0, comma), key));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// reading

/// Raw key/value pairs in file order; '#' starts a comment.
using Entries = std::vector<std::pair<std::string, std::string>>;

inline Entries parse_entries(std::string_view text) {
    Entries out;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view l = line;
        if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
        l = trim(l);
        if (l.empty()) continue;
        const auto eq = l.find('=');
        if (eq == std::string_view::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const auto key = trim(l.substr(0, eq));
        const auto value = trim(l.substr(eq + 1));
        if (key.empty() || value.empty())
            throw UsageError("config line " + std::to_string(lineno) + ": empty key or value");
        for (const auto& [k, v] : out)
            if (k == key) throw UsageError("config line " + std::to_string(lineno) + ": duplicate key '" + k + "'");
        out.emplace_back(std::string(key), std::string(value));
    }
    return out;
}

/// Applies entries on top of `cfg` (presets or defaults).
inline SweepConfig apply_entries(SweepConfig cfg, const Entries& entries) {
    struct AxisDraft {
        std::optional<std::string> name;
        std::optional<double> min, max;
        std::optional<int> steps;
        std::optional<std::vector<double>> values;
    };
    std::map<int, AxisDraft> drafts;
    bool axes_given = false;

    for (const auto& [key, value] : entries) {
        if (key == "name") {
            cfg.name = value;
        } else if (key == "sweep.target") {
            cfg.target = parse_target(value);
        } else if (key == "sweep.primary") {
            cfg.primary = value;
        } else if (key == "output.path") {
            cfg.output_path = value;
        } else if (key == "output.format") {
            cfg.format = parse_format(value);
        } else if (key == "detuning.mode") {
            cfg.base.detuning_mode = parse_detuning_mode(value);
        } else if (key == "magnon_drive.mode") {
            cfg.base.drive_mode = parse_drive_mode(value);
        } else if (key.rfind("sweep.axis", 0) == 0) {
            axes_given = true;
            const auto rest = std::string_view(key).substr(10);
            const auto dot = rest.find('.');
            if (dot == std::string_view::npos) throw UsageError("malformed axis key '" + key + "'");
            const int idx = parse_int(rest.substr(0, dot), key);
            if (idx < 1 || idx > 2) throw UsageError("'" + key + "': only sweep.axis1 and sweep.axis2 exist");
            const auto field = rest.substr(dot + 1);
            auto& d = drafts[idx];
            if (field == "name") d.name = value;
            else if (field == "min") d.min = parse_double(value, key);
            else if (field == "max") d.max = parse_double(value, key);
            else if (field == "steps") d.steps = parse_int(value, key);
            else if (field == "values") d.values = parse_list(value, key);
            else throw UsageError("unknown axis field '" + key + "'");
        } else if (const auto* def = find_parameter(key); def && def->key == key) {
            cfg.base.*(def->field) = parse_double(value, key);
        } else {
            throw UsageError("unknown config key '" + key + "'");
        }
    }

    if (axes_given) {
        cfg.axes.clear();
        if (drafts.count(2) && !drafts.count(1)) throw UsageError("sweep.axis2 given without sweep.axis1");
        for (auto& [idx, d] : drafts) {
            const std::string label = "sweep.axis" + std::to_string(idx);
            if (!d.name) throw UsageError(label + ".name is missing");
            if (!find_parameter(*d.name)) throw UsageError(label + ": unknown parameter '" + *d.name + "'");
            const std::string column{find_parameter(*d.name)->column()};
            const bool range = d.min || d.max || d.steps;
            if (range && d.values) throw UsageError(label + ": give either min/max/steps or values, not both");
            if (d.values) {
                if (d.values->empty()) throw UsageError(label + ".values is empty");
                cfg.axes.push_back(list_axis(column, *d.values));
            } else {
                if (!d.min || !d.max || !d.steps) throw UsageError(label + ": needs min, max and steps");
                if (*d.steps < 2) throw UsageError(label + ".steps must be >= 2");
                if (!(*d.max > *d.min)) throw UsageError(label + ": max must exceed min");
                cfg.axes.push_back(range_axis(column, *d.min, *d.max, *d.steps));
            }
        }
    }
    return cfg;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// writing

/// Canonical text of a config; parse_config(to_config_text(c)) == c.
inline std::string to_config_text(const SweepConfig& cfg) {
    std::string out;
    auto line = [&](std::string_view k, std::string_view v) {
        out.append(k).append(" = ").append(v).push_back('\n');
    };
    line("name", cfg.name);
    for (const auto& d : parameter_table()) line(d.key, format_double(cfg.base.*(d.field)));
    line("detuning.mode", to_string(cfg.base.detuning_mode));
    line("magnon_drive.mode", to_string(cfg.base.drive_mode));
    line("sweep.target", to_string(cfg.target));
    if (!cfg.primary.empty()) line("sweep.primary", cfg.primary);
    for (std::size_t k = 0; k < cfg.axes.size(); ++k) {
        const auto& a = cfg.axes[k];
        const std::string p = "sweep.axis" + std::to_string(k + 1) + ".";
        line(p + "name", a.name);
        if (a.is_range) {
            line(p + "min", format_double(a.min));
            line(p + "max", format_double(a.max));
            line(p + "steps", std::to_string(a.steps));
        } else {
            std::string list;
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                if (i) list += ", ";
                list += format_double(a.values[i]);
            }
            line(p + "values", list);
        }
    }
    if (!cfg.output_path.empty()) line("output.path", cfg.output_path);
    line("output.format", to_string(cfg.format));
    return out;
}

inline SweepConfig parse_config(std::string_view text) { return apply_entries(SweepConfig{}, parse_entries(text)); }

inline SweepConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

/// 64-bit FNV-1a of the canonical config text.
inline std::uint64_t config_hash(const SweepConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : to_config_text(cfg)) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return s;
}

// ---------------------------------------------------------------------------
// conversion to physics units

inline SystemParams system_params(const PointSpec& p) {
    using constants::angular;
    SystemParams s;
    s.cavity_freq = angular(p.omega_a);
    s.magnon_freq = angular(p.omega_m > 0.0 ? p.omega_m : p.omega_a);
    s.mech_freq = angular(p.omega_b);
    s.kappa_a = angular(p.kappa_a);
    s.kappa_m = angular(p.kappa_m);
    s.gamma_b = angular(p.gamma_b);
    s.g_ma = angular(p.g_ma);
    s.g_mb = angular(p.g_mb);
    s.temperature = p.temperature;
    s.sphere_diameter = p.diameter;
    s.rabi = p.rabi;
    return s;
}

inline SqueezedDrive squeezed_drive(const PointSpec& p) {
    return {p.r, p.theta, constants::angular(p.delta_s)};
}

/// Checks one point against the parameter invariants of `target`; throws
/// InvalidParameter or UsageError.
inline void validate_point(const PointSpec& p, Target target) {
    system_params(p).validate(true);
    if (!(p.r >= 0.0)) throw InvalidParameter("r must be >= 0");
    for (double v : {p.rabi, p.b0, p.coupling})
        if (!(v >= 0.0)) throw InvalidParameter("magnon drive parameters must be >= 0");
    const bool needs_mechanics = target == Target::mechanical_variance || target == Target::validity;
    if (needs_mechanics && !(p.omega_b > 0.0)) throw InvalidParameter("omega_b_over_2pi_Hz must be > 0");
    if (needs_mechanics && p.drive_mode == MagnonDriveMode::target_coupling &&
        p.detuning_mode != DetuningMode::effective)
        throw UsageError("magnon_drive.mode = target_coupling needs detuning.mode = effective");
    if (needs_mechanics && p.drive_mode == MagnonDriveMode::field && !(p.diameter > 0.0))
        throw InvalidParameter("magnon_drive.mode = field needs diameter_m > 0");
}

/// Validates every grid point; the first failure is rethrown with its index.
inline void validate_config(const SweepConfig& cfg) {
    if (cfg.axes.size() > 2) throw UsageError("at most two sweep axes");
    if (cfg.axes.size() == 2 && cfg.axes[0].name == cfg.axes[1].name)
        throw UsageError("the two sweep axes must differ");
    for (const auto& a : cfg.axes) {
        if (!find_parameter(a.name)) throw UsageError("unknown axis parameter '" + a.name + "'");
        if (a.values.empty()) throw UsageError("axis '" + a.name + "' has no values");
    }
    const auto n = cfg.grid_size();
    for (std::size_t i = 0; i < n; ++i) {
        try {
            validate_point(cfg.point(i), cfg.target);
        } catch (const InvalidParameter& e) {
            throw InvalidParameter("grid point " + std::to_string(i) + ": " + e.what());
        }
    }
}

} // namespace magsq::sweep
