// magsq: parameter sweeps and figure presets for magnon / phonon squeezing.
//
//   magsq preset fig2a --out fig2a.csv
//   magsq preset fig4c --dump-config > fig4c.cfg
//   magsq sweep my.cfg --format json --jobs 4
//   magsq validate my.cfg
//   magsq spectrum my.cfg
//
// Exit status: 0 success, 1 usage error, 2 numerical failure of the run.

#include <cstdio>
#include <iostream>
#include <map>
#include <mutex>
#include <string>

#include <CLI11.hpp>

#include "magsq/magsq.hpp"

namespace {

using namespace magsq;
using namespace magsq::sweep;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_numerical = 2;

struct CommonFlags {
    std::string out;
    std::string format;
    unsigned jobs = 0;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("-o,--out", f.out, "Output path ('-' for stdout)");
    cmd->add_option("-f,--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("-j,--jobs", f.jobs, "Worker threads (0 = all cores)");
    cmd->add_flag("-q,--quiet", f.quiet, "No progress or summary on stderr");
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// --format wins, then the --out extension, then the config.
void resolve_output(SweepConfig& cfg, const CommonFlags& f) {
    if (!f.format.empty()) cfg.format = parse_format(f.format);
    else if (ends_with(f.out, ".json")) cfg.format = Format::json;
    else if (ends_with(f.out, ".csv")) cfg.format = Format::csv;
    if (!f.out.empty()) cfg.output_path = f.out;
    else if (cfg.output_path.empty() || !f.format.empty())
        cfg.output_path = cfg.name + (cfg.format == Format::csv ? ".csv" : ".json");
}

ResultTable run(const SweepConfig& cfg, const CommonFlags& f) {
    RunOptions opt;
    opt.jobs = f.jobs;
    std::mutex io;
    const std::size_t total = cfg.grid_size();
    const std::size_t stride = std::max<std::size_t>(1, total / 20);
    if (!f.quiet && total > 1) {
        opt.progress = [&](std::size_t done, std::size_t n) {
            if (done % stride != 0 && done != n) return;
            std::lock_guard lock(io);
            std::fprintf(stderr, "\r%s: %zu/%zu", cfg.name.c_str(), done, n);
            if (done == n) std::fputc('\n', stderr);
        };
    }
    return run_sweep(cfg, opt);
}

int finish(const ResultTable& t, const CommonFlags& f) {
    const auto& cfg = t.config;
    if (cfg.output_path == "-") write_table(std::cout, t, cfg.format);
    else emit(t, cfg.format, cfg.output_path);
    const auto s = summarize(t);
    if (!f.quiet)
        std::fprintf(stderr, "%s: %zu rows (%zu ok, %zu unstable, %zu failed) -> %s\n", cfg.name.c_str(),
                     t.rows.size(), s.ok, s.unstable, s.failed, cfg.output_path.c_str());
    if (!t.rows.empty() && s.failed == t.rows.size()) {
        std::fprintf(stderr, "error: every grid point failed\n");
        return exit_numerical;
    }
    return exit_ok;
}

/// Spectral features of each trace, grouped by the non-frequency axis.
void report_features(const ResultTable& t) {
    const auto& axes = t.config.axes;
    std::size_t w_axis = 0;
    while (w_axis < axes.size() && axes[w_axis].name != "omega_over_2pi_Hz") ++w_axis;
    const std::size_t s_col = axes.size() + 1;
    std::map<std::string, SpectrumTrace> traces;
    std::vector<std::string> order;
    for (const auto& row : t.rows) {
        std::string key;
        for (std::size_t k = 0; k < axes.size(); ++k)
            if (k != w_axis) key += axes[k].name + "=" + format_double(std::get<double>(row[k])) + " ";
        const auto* s = std::get_if<double>(&row[s_col]);
        if (!s) continue;
        if (!traces.count(key)) order.push_back(key);
        auto& tr = traces[key];
        tr.omega.push_back(std::get<double>(row[w_axis]));
        tr.values.push_back(*s);
    }
    for (const auto& key : order) {
        std::fprintf(stderr, "%sextrema at omega/2pi [Hz]:", key.c_str());
        for (double w : find_spectrum_features(traces[key])) std::fprintf(stderr, " %s", format_double(w).c_str());
        std::fputc('\n', stderr);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Squeezing of magnons and phonons: sweeps, presets, spectra"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string preset_name, config_path;
    bool dump_config = false;

    auto* preset = app.add_subcommand("preset", "Run a figure preset");
    std::string names;
    for (auto n : preset_names) names.append(names.empty() ? "" : ", ").append(n);
    preset->add_option("name", preset_name, "One of: " + names)->required();
    preset->add_flag("--dump-config", dump_config, "Print the preset as a config file instead of running it");
    add_common(preset, flags);

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a sweep from a config file");
    sweep_cmd->add_option("config", config_path, "Config file")->required();
    add_common(sweep_cmd, flags);

    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    validate->add_option("config", config_path, "Config file")->required();
    add_common(validate, flags);

    auto* spectrum = app.add_subcommand("spectrum", "Output-field spectrum over an omega axis");
    spectrum->add_option("config", config_path, "Config file")->required();
    add_common(spectrum, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (preset->parsed()) {
            auto cfg = figure_preset(preset_name);
            if (dump_config) {
                std::cout << to_config_text(cfg);
                return exit_ok;
            }
            resolve_output(cfg, flags);
            return finish(run(cfg, flags), flags);
        }
        auto cfg = load_config(config_path);
        if (validate->parsed()) {
            validate_config(cfg);
            if (!flags.quiet)
                std::printf("%s: valid, target %s, %zu grid points, hash fnv1a64:%s\n", cfg.name.c_str(),
                            std::string(to_string(cfg.target)).c_str(), cfg.grid_size(),
                            hash_hex(config_hash(cfg)).c_str());
            return exit_ok;
        }
        if (spectrum->parsed()) {
            cfg.target = Target::output_spectrum;
            bool has_omega = false;
            for (const auto& a : cfg.axes) has_omega |= a.name == "omega_over_2pi_Hz";
            if (!has_omega) throw UsageError("spectrum needs a sweep axis over omega_over_2pi_Hz");
        }
        resolve_output(cfg, flags);
        const auto table = run(cfg, flags);
        const int code = finish(table, flags);
        if (spectrum->parsed() && !flags.quiet) report_features(table);
        return code;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return exit_usage;
    } catch (const InvalidParameter& e) {
        std::fprintf(stderr, "invalid parameter: %s\n", e.what());
        return exit_usage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numerical;
    }
}
