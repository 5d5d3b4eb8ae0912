/**
 * @file sweep.hpp
 * @brief Parameter sweeps over h (and alpha) and their CSV / JSON output.
 *
 * Rows are ordered by (alpha, h) whatever order the workers finish in, and
 * the data files carry no timing information, so a given configuration
 * always produces the same bytes. Timings go to a separate .meta.json.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bloch_model.hpp"
#include "core.hpp"
#include "invariants.hpp"
#include "quadrature.hpp"

namespace qgeom {

/// Malformed command line or configuration (exit code 2).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Output could not be written (exit code 3).
class IoError : public Error {
public:
    using Error::Error;
};

enum class Format { csv, json };

struct SweepConfig {
    double h_min = -3.0;
    double h_max = 3.0;
    int h_count = 61;
    std::vector<double> alphas{1.0};
    double omega = 2.0;
    std::size_t grid = 2048;
    Format format = Format::csv;
    std::optional<std::string> out_path;
    /// 0 means one worker per hardware thread
    unsigned jobs = 0;
    /// rows with ||h| - 1| below this are emitted as `critical` without computing
    double exclusion = 0.02;
    bool round = false;
    /// restrict ky to [0, pi]
    bool ky_half = false;

    void validate() const
    {
        if (h_count < 2)
            throw UsageError("--h-count must be at least 2, got " + std::to_string(h_count));
        if (!std::isfinite(h_min) || !std::isfinite(h_max) || !(h_min < h_max))
            throw UsageError("need finite --h-min < --h-max");
        if (alphas.empty())
            throw UsageError("--alpha needs at least one value");
        for (double a : alphas) {
            if (!std::isfinite(a))
                throw UsageError("--alpha values must be finite");
        }
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw UsageError("--omega must be positive");
        if (grid < 32)
            throw UsageError("--grid must be at least 32");
        if (!(exclusion >= tol::gap_tol))
            throw UsageError("--exclusion must be at least " + std::to_string(tol::gap_tol));
    }

    QuadratureSpec quadrature() const
    {
        QuadratureSpec spec;
        spec.n_points = grid;
        if (ky_half)
            spec.ky = Interval{0.0, pi};
        return spec;
    }

    std::vector<double> h_values() const
    {
        std::vector<double> hs(static_cast<std::size_t>(h_count));
        const double step = (h_max - h_min) / static_cast<double>(h_count - 1);
        for (int i = 0; i < h_count; ++i)
            hs[static_cast<std::size_t>(i)] = i == h_count - 1 ? h_max : h_min + i * step;
        return hs;
    }
};

struct SweepRow {
    double h = 0.0;
    double alpha = 1.0;
    std::optional<double> chern;
    std::optional<double> chi_naive;
    std::optional<double> chi_corrected;
    std::optional<int> multiplicity;
    /// set for a cap; empty with full_sphere for the whole sphere
    std::optional<double> theta0;
    bool full_sphere = false;
    std::string status = "ok";
    std::string message;
    /// skipped by the exclusion zone, never computed
    bool excluded = false;
    InvariantErrors est_error;
    double multiplicity_raw = 0.0;
    double wall_time_ms = 0.0;

    bool ok() const { return status == "ok"; }
};

namespace detail {

inline SweepRow failed_row(double h, double alpha, const char* status, const std::exception& e)
{
    SweepRow row;
    row.h = h;
    row.alpha = alpha;
    row.status = status;
    row.message = e.what();
    return row;
}

}  // namespace detail

inline SweepRow compute_row(double h, double alpha, const SweepConfig& cfg)
{
    SweepRow row;
    row.h = h;
    row.alpha = alpha;
    if (std::abs(std::abs(h) - 1.0) < cfg.exclusion) {
        row.status = "critical";
        row.message = "inside the exclusion zone around |h|=1";
        row.excluded = true;
        return row;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
        const InvariantReport r = compute_report(ModelParams{h, alpha, cfg.omega}, cfg.quadrature());
        row.chern = r.chern;
        row.chi_naive = r.chi_naive;
        row.chi_corrected = r.chi_corrected;
        row.multiplicity = r.multiplicity;
        row.multiplicity_raw = r.multiplicity_raw;
        row.theta0 = r.theta0;
        row.full_sphere = !r.theta0.has_value();
        row.est_error = r.est_error;
        if (cfg.round) {
            row.chern = round_checked(r.chern, r.est_error.chern);
            row.chi_corrected = round_checked(r.chi_corrected, r.est_error.chi_corrected);
        }
    } catch (const CriticalPoint& e) {
        row = detail::failed_row(h, alpha, "critical", e);
    } catch (const DegenerateAlpha& e) {
        row = detail::failed_row(h, alpha, "degenerate", e);
    } catch (const NonIntegralMultiplicity& e) {
        row = detail::failed_row(h, alpha, "nonintegral", e);
    } catch (const NonIntegralValue& e) {
        row = detail::failed_row(h, alpha, "nonintegral", e);
    } catch (const NonConvergent& e) {
        row = detail::failed_row(h, alpha, "nonconvergent", e);
    } catch (const GapClosure& e) {
        row = detail::failed_row(h, alpha, "gap_closure", e);
    }
    row.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

/// One row per (alpha, h), sorted by alpha then h.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg)
{
    cfg.validate();
    std::vector<double> alphas = cfg.alphas;
    std::stable_sort(alphas.begin(), alphas.end());
    const std::vector<double> hs = cfg.h_values();

    std::vector<std::pair<double, double>> tasks;
    for (double a : alphas) {
        for (double h : hs)
            tasks.emplace_back(a, h);
    }

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++)
            rows[i] = compute_row(tasks[i].second, tasks[i].first, cfg);
    };

    unsigned jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.jobs;
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, tasks.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < jobs; ++j)
            pool.emplace_back(worker);
        worker();
    }
    return rows;
}

/// %.12g, the serialisation used for every float in the data files.
inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline const char* csv_header() { return "h,alpha,chern,chi_naive,chi_corrected,multiplicity,theta0,status"; }

inline std::string to_csv(const std::vector<SweepRow>& rows)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; };
    std::string out = csv_header();
    out += '\n';
    for (const SweepRow& r : rows) {
        out += format_number(r.h) + ',' + format_number(r.alpha) + ',' + opt(r.chern) + ',' + opt(r.chi_naive) + ',' +
               opt(r.chi_corrected) + ',' + (r.multiplicity ? std::to_string(*r.multiplicity) : std::string{}) + ',';
        if (r.ok())
            out += r.full_sphere ? std::string("full") : opt(r.theta0);
        out += ',' + r.status + '\n';
    }
    return out;
}

namespace detail {

/// The double nearest to the 12-digit decimal that goes into the file.
inline nlohmann::ordered_json json_number(const std::optional<double>& v)
{
    if (!v)
        return nullptr;
    return std::stod(format_number(*v));
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const std::vector<SweepRow>& rows)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const SweepRow& r : rows) {
        nlohmann::ordered_json o;
        o["h"] = detail::json_number(r.h);
        o["alpha"] = detail::json_number(r.alpha);
        o["chern"] = detail::json_number(r.chern);
        o["chi_naive"] = detail::json_number(r.chi_naive);
        o["chi_corrected"] = detail::json_number(r.chi_corrected);
        o["multiplicity"] = r.multiplicity ? nlohmann::ordered_json(*r.multiplicity) : nlohmann::ordered_json(nullptr);
        if (r.ok() && r.full_sphere)
            o["theta0"] = "full";
        else
            o["theta0"] = r.ok() ? detail::json_number(r.theta0) : nlohmann::ordered_json(nullptr);
        o["status"] = r.status;
        arr.push_back(std::move(o));
    }
    return arr;
}

inline std::string render(const std::vector<SweepRow>& rows, Format format)
{
    if (format == Format::csv)
        return to_csv(rows);
    return to_json(rows).dump(2) + '\n';
}

/// Timings, error estimates and the configuration; kept out of the data file.
inline nlohmann::ordered_json meta_json(const SweepConfig& cfg, const std::vector<SweepRow>& rows)
{
    nlohmann::ordered_json m;
    m["config"] = {{"h-min", cfg.h_min},   {"h-max", cfg.h_max},         {"h-count", cfg.h_count},
                   {"alpha", cfg.alphas},  {"omega", cfg.omega},         {"grid", cfg.grid},
                   {"format", cfg.format == Format::csv ? "csv" : "json"}, {"exclusion", cfg.exclusion},
                   {"round", cfg.round},   {"ky-half", cfg.ky_half}};
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const SweepRow& r : rows) {
        list.push_back({{"h", r.h},
                        {"alpha", r.alpha},
                        {"status", r.status},
                        {"message", r.message},
                        {"est_error_chern", r.est_error.chern},
                        {"est_error_chi_naive", r.est_error.chi_naive},
                        {"est_error_chi_corrected", r.est_error.chi_corrected},
                        {"multiplicity_raw", r.multiplicity_raw},
                        {"wall_time_ms", r.wall_time_ms}});
    }
    m["rows"] = std::move(list);
    return m;
}

inline std::filesystem::path meta_path(const std::filesystem::path& out)
{
    std::filesystem::path p = out;
    p.replace_extension(".meta.json");
    return p;
}

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    f.flush();
    if (!f)
        throw IoError("failed writing " + path.string());
}

inline void emit(const std::vector<SweepRow>& rows, Format format, const std::filesystem::path& out_path)
{
    if (rows.empty())
        throw std::invalid_argument("emit needs at least one row");
    write_file(out_path, render(rows, format));
}

}  // namespace qgeom
