/**
 * @file cli.hpp
 * @brief Command line of the sweep tool.
 *
 * Exit codes: 0 success, 1 every row excluded, 2 usage, 3 I/O.
 * A flat JSON config file (`--config`) can supply any flag by its long name
 * without the dashes; flags given on the command line win.
 */
#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sweep.hpp"

namespace qgeom {

/// Thrown by parse_config for --help; carries the text to print.
struct HelpRequested {
    std::string text;
};

namespace detail {

inline Format parse_format(const std::string& s)
{
    if (s == "csv")
        return Format::csv;
    if (s == "json")
        return Format::json;
    throw UsageError("format must be csv or json, got '" + s + "'");
}

inline void load_config_file(const std::string& path, SweepConfig& cfg, const CLI::App& app)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object())
        throw UsageError("config file must hold a flat JSON object");

    auto given = [&](const std::string& key) { return app.get_option("--" + key)->count() > 0; };
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "h-min") {
                if (!given(key))
                    cfg.h_min = value.get<double>();
            } else if (key == "h-max") {
                if (!given(key))
                    cfg.h_max = value.get<double>();
            } else if (key == "h-count") {
                if (!given(key))
                    cfg.h_count = value.get<int>();
            } else if (key == "alpha") {
                if (!given(key))
                    cfg.alphas = value.is_array() ? value.get<std::vector<double>>()
                                                  : std::vector<double>{value.get<double>()};
            } else if (key == "omega") {
                if (!given(key))
                    cfg.omega = value.get<double>();
            } else if (key == "grid") {
                if (!given(key))
                    cfg.grid = value.get<std::size_t>();
            } else if (key == "format") {
                if (!given(key))
                    cfg.format = parse_format(value.get<std::string>());
            } else if (key == "out") {
                if (!given(key))
                    cfg.out_path = value.get<std::string>();
            } else if (key == "jobs") {
                if (!given(key))
                    cfg.jobs = value.get<unsigned>();
            } else if (key == "exclusion") {
                if (!given(key))
                    cfg.exclusion = value.get<double>();
            } else if (key == "round") {
                if (!given(key))
                    cfg.round = value.get<bool>();
            } else if (key == "ky-half") {
                if (!given(key))
                    cfg.ky_half = value.get<bool>();
            } else {
                throw UsageError("unknown config key '" + key +
                                 "' (known: h-min h-max h-count alpha omega grid format out jobs exclusion round "
                                 "ky-half)");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file " + path + ": wrong value type: " + e.what());
    }
}

}  // namespace detail

/// Builds a SweepConfig from argv (argv[0] is the program name).
inline SweepConfig parse_config(int argc, const char* const* argv)
{
    SweepConfig cfg;
    CLI::App app{"Chern number and Euler characteristic sweeps for the two-band model"};
    app.name("qgeom_sweep");

    std::string format = "csv";
    std::string out;
    std::string config_file;
    std::vector<double> alphas;

    app.add_option("--h-min", cfg.h_min, "lower end of the h range")->capture_default_str();
    app.add_option("--h-max", cfg.h_max, "upper end of the h range")->capture_default_str();
    app.add_option("--h-count", cfg.h_count, "number of h values (>= 2)")->capture_default_str();
    app.add_option("--alpha", alphas, "alpha value(s), comma separated (default 1)")->delimiter(',');
    app.add_option("--omega", cfg.omega, "energy scale Omega (> 0)")->capture_default_str();
    app.add_option("--grid", cfg.grid, "quadrature points along kx")->capture_default_str();
    app.add_option("--format", format, "csv or json")->capture_default_str();
    app.add_option("--out", out, "output file (default: stdout)");
    app.add_option("--jobs", cfg.jobs, "worker threads, 0 = all cores")->capture_default_str();
    app.add_option("--exclusion", cfg.exclusion, "half-width of the skipped zone around |h|=1")
        ->capture_default_str();
    app.add_flag("--round", cfg.round, "check chern and chi_corrected are integers and round them");
    app.add_flag("--ky-half", cfg.ky_half, "integrate ky over [0, pi] instead of [0, 2pi]");
    app.add_option("--config", config_file, "flat JSON file with any of the above keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (!alphas.empty())
        cfg.alphas = alphas;
    if (app.get_option("--format")->count() > 0)
        cfg.format = detail::parse_format(format);
    if (!out.empty())
        cfg.out_path = out;
    if (!config_file.empty())
        detail::load_config_file(config_file, cfg, app);

    cfg.validate();
    return cfg;
}

/// Runs the tool; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    SweepConfig cfg;
    try {
        cfg = parse_config(argc, argv);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for the list of options\n";
        return 2;
    }

    const std::vector<SweepRow> rows = run_sweep(cfg);
    if (std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.excluded; })) {
        err << "no rows: every h value lies inside the exclusion zone around |h|=1\n";
        return 1;
    }

    try {
        if (cfg.out_path) {
            emit(rows, cfg.format, *cfg.out_path);
            write_file(meta_path(*cfg.out_path), meta_json(cfg, rows).dump(2) + '\n');
        } else {
            out << render(rows, cfg.format);
        }
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace qgeom
