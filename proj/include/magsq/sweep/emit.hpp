#pragma once

// CSV and JSON writers for sweep tables. Numbers are written in shortest
// round-trip form so re-reading gives the same doubles; no timestamps, so
// equal configs give equal bytes.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "runner.hpp"

namespace magsq::sweep {

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline std::string csv_cell(const Cell& c) {
    struct {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return std::isfinite(v) ? format_double(v) : std::string(); }
        std::string operator()(bool b) const { return b ? "1" : "0"; }
        std::string operator()(const std::string& s) const { return csv_escape(s); }
    } visit;
    return std::visit(visit, c);
}

inline nlohmann::ordered_json json_cell(const Cell& c) {
    struct {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const {
            return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
        }
        nlohmann::ordered_json operator()(bool b) const { return b; }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    } visit;
    return std::visit(visit, c);
}

} // namespace detail

/// Header row plus one line per table row. Empty cells mark values that were
/// not computed (unstable or failed points).
inline void write_csv(std::ostream& out, const ResultTable& t) {
    for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << detail::csv_escape(t.columns[k]);
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << detail::csv_cell(row[k]);
        out << '\n';
    }
}

/// Resolved configuration as a JSON object of its canonical key/value pairs.
inline nlohmann::ordered_json config_json(const SweepConfig& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : parse_entries(to_config_text(cfg))) j[k] = v;
    return j;
}

inline nlohmann::ordered_json to_json(const ResultTable& t) {
    nlohmann::ordered_json j;
    auto& meta = j["metadata"];
    meta["generator"] = "magsq-sweep";
    meta["name"] = t.config.name;
    meta["target"] = std::string(to_string(t.config.target));
    meta["primary"] = t.config.primary;
    meta["config_hash"] = "fnv1a64:" + hash_hex(config_hash(t.config));
    meta["config"] = config_json(t.config);
    meta["columns"] = t.columns;
    auto& rows = j["rows"];
    rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t k = 0; k < row.size(); ++k) obj[t.columns[k]] = detail::json_cell(row[k]);
        rows.push_back(std::move(obj));
    }
    return j;
}

inline void write_json(std::ostream& out, const ResultTable& t) { out << to_json(t).dump(1) << '\n'; }

inline void write_table(std::ostream& out, const ResultTable& t, Format f) {
    if (f == Format::csv) write_csv(out, t);
    else write_json(out, t);
}

/// Writes to `path`; throws IoError naming the path on failure.
inline void emit(const ResultTable& t, Format f, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file", path);
    write_table(out, t, f);
    out.flush();
    if (!out) throw IoError("write failed", path);
}

} // namespace magsq::sweep
