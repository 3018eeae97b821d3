#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frust/analysis.hpp"
#include "frust/correlation.hpp"
#include "frust/errors.hpp"
#include "frust/hierarchy.hpp"
#include "frust/ingest.hpp"
#include "frust/io_formats.hpp"
#include "frust/measures.hpp"
#include "frust/numfmt.hpp"
#include "frust/reference_data.hpp"
#include "frust/relations.hpp"

namespace frust {

inline constexpr const char* kToolVersion = "0.1.0";

// ============================================================================
// Run configuration
// ============================================================================

enum class OutputFormat { csv, json, both };

inline bool wants_csv(OutputFormat f) { return f != OutputFormat::json; }
inline bool wants_json(OutputFormat f) { return f != OutputFormat::csv; }

struct RunConfig {
    std::vector<std::pair<std::string, std::string>> sectors; // (id, csv path), input order kept
    std::size_t min_obs = 20;
    double zero_tol = 0.0;
    double eps_frac = 0.10;
    double pick_frac = 0.25;
    bool log_returns = false;
    bool fill_forward = false;
    int fill_max_gap_days = 5;
    std::string out_dir;
    OutputFormat format = OutputFormat::both;
};

inline void validate(const RunConfig& cfg) {
    if (cfg.sectors.size() < 3)
        throw ValidationError("need at least 3 sectors, got " + std::to_string(cfg.sectors.size()));
    if (cfg.sectors.size() > kMaxHierarchyLevel)
        throw ValidationError("at most " + std::to_string(kMaxHierarchyLevel) +
                              " sectors supported");
    std::set<std::string> ids, paths;
    for (const auto& [id, path] : cfg.sectors) {
        if (id.empty()) throw ValidationError("empty sector id");
        if (path.empty()) throw ValidationError("empty path for sector " + id);
        if (!ids.insert(id).second) throw ValidationError("duplicate sector id " + id);
        if (!paths.insert(path).second) throw ValidationError("duplicate sector path " + path);
    }
    if (cfg.min_obs < 1) throw ValidationError("min_obs must be positive");
    if (!(cfg.zero_tol >= 0.0)) throw ValidationError("zero_tol must be non-negative");
    if (!(cfg.eps_frac > 0.0 && cfg.eps_frac < 1.0))
        throw ValidationError("eps_frac must be in (0,1)");
    if (!(cfg.pick_frac > 0.0 && cfg.pick_frac < 1.0))
        throw ValidationError("pick_frac must be in (0,1)");
    if (cfg.fill_max_gap_days < 0) throw ValidationError("fill_max_gap_days must be non-negative");
}

inline json config_echo_json(const RunConfig& cfg) {
    json sectors = json::array();
    for (const auto& [id, path] : cfg.sectors)
        sectors.push_back(json{{"id", id}, {"path", path}});
    const char* fmt = cfg.format == OutputFormat::csv    ? "csv"
                      : cfg.format == OutputFormat::json ? "json"
                                                         : "both";
    return json{{"sectors", std::move(sectors)},
                {"min_obs", cfg.min_obs},
                {"zero_tol", cfg.zero_tol},
                {"eps_frac", cfg.eps_frac},
                {"pick_frac", cfg.pick_frac},
                {"returns", cfg.log_returns ? "log" : "levels"},
                {"fill_forward", cfg.fill_forward},
                {"fill_max_gap_days", cfg.fill_max_gap_days},
                {"format", fmt}};
}

// ============================================================================
// Flat key=value config file; '#' starts a comment, unknown keys are errors.
// Command-line flags override anything set here.
// ============================================================================

namespace detail {

inline std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : value) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

} // namespace detail

inline void apply_config_entry(RunConfig& cfg, std::string_view key, std::string_view value,
                               const std::string& context) {
    auto as_double = [&](std::string_view v) {
        double d = 0.0;
        if (!detail::parse_level(v, d))
            throw ValidationError(context + ": bad number '" + std::string(v) + "' for " +
                                  std::string(key));
        return d;
    };
    auto as_bool = [&](std::string_view v) {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ValidationError(context + ": bad boolean '" + std::string(v) + "' for " +
                              std::string(key));
    };

    if (key == "sectors") {
        cfg.sectors.clear();
        for (const auto& entry : detail::split_list(value)) {
            const auto eq = entry.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
                throw ValidationError(context + ": sectors entries must be ID=path, got '" +
                                      entry + "'");
            cfg.sectors.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
        }
    } else if (key == "min-obs") {
        const double d = as_double(value);
        if (d < 1 || d != std::floor(d))
            throw ValidationError(context + ": min-obs must be a positive integer");
        cfg.min_obs = static_cast<std::size_t>(d);
    } else if (key == "zero-tol") {
        cfg.zero_tol = as_double(value);
    } else if (key == "eps-frac") {
        cfg.eps_frac = as_double(value);
    } else if (key == "pick-frac") {
        cfg.pick_frac = as_double(value);
    } else if (key == "returns") {
        if (value != "levels" && value != "log")
            throw ValidationError(context + ": returns must be 'levels' or 'log'");
        cfg.log_returns = value == "log";
    } else if (key == "fill-forward") {
        cfg.fill_forward = as_bool(value);
    } else if (key == "max-gap-days") {
        cfg.fill_max_gap_days = static_cast<int>(as_double(value));
    } else if (key == "out") {
        cfg.out_dir = std::string(value);
    } else if (key == "format") {
        if (value == "csv") cfg.format = OutputFormat::csv;
        else if (value == "json") cfg.format = OutputFormat::json;
        else if (value == "both") cfg.format = OutputFormat::both;
        else throw ValidationError(context + ": format must be csv, json or both");
    } else {
        throw ValidationError(context + ": unknown config key '" + std::string(key) + "'");
    }
}

inline void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view row = detail::trim(line);
        if (const auto hash = row.find('#'); hash != std::string_view::npos)
            row = detail::trim(row.substr(0, hash));
        if (row.empty()) continue;
        const auto eq = row.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(path.string() + ": expected key=value", line_no);
        const auto key = detail::trim(row.substr(0, eq));
        const auto value = detail::trim(row.substr(eq + 1));
        apply_config_entry(cfg, key, value,
                           path.filename().string() + " line " + std::to_string(line_no));
    }
}

// ============================================================================
// Run manifest
// ============================================================================

struct DegeneratePairRecord {
    WindowId window;
    std::string a, b;
};

struct RunManifest {
    json config_echo;
    std::vector<std::string> sectors;
    std::vector<std::string> window_tags;
    std::vector<SkippedWindow> skipped_windows;
    std::vector<DegeneratePairRecord> degenerate_pairs;
    std::vector<std::string> artifacts;
    std::vector<std::string> notes;
    double wall_ms = 0.0; // in-memory only; kept out of manifest.json so reruns are byte-identical
};

inline json manifest_json(const RunManifest& mf) {
    json skipped = json::array();
    for (const auto& sw : mf.skipped_windows)
        skipped.push_back(json{{"year", sw.window.year},
                               {"half", sw.window.half},
                               {"y", sw.window.y()},
                               {"rows", sw.rows},
                               {"reason", sw.reason}});
    json degen = json::array();
    for (const auto& dp : mf.degenerate_pairs)
        degen.push_back(json{{"window", dp.window.tag()}, {"a", dp.a}, {"b", dp.b}});
    return json{{"tool", "frust"},
                {"version", kToolVersion},
                {"config", mf.config_echo},
                {"sectors", mf.sectors},
                {"windows", mf.window_tags},
                {"skipped_windows", std::move(skipped)},
                {"degenerate_pairs", std::move(degen)},
                {"artifacts", mf.artifacts},
                {"notes", mf.notes}};
}

// ============================================================================
// Shared post-correlation stages
// ============================================================================

struct AnalysisParams {
    double zero_tol = 0.0;
    double eps_frac = 0.10;
    double pick_frac = 0.25;
    OutputFormat format = OutputFormat::both;
};

namespace detail {

inline void add_artifact(RunManifest& mf, const std::filesystem::path& out_dir,
                         const std::filesystem::path& rel, const std::string& content) {
    write_text_file(out_dir / rel, content);
    mf.artifacts.push_back(rel.generic_string());
}

inline void add_json_artifact(RunManifest& mf, const std::filesystem::path& out_dir,
                              const std::filesystem::path& rel, const json& j) {
    write_json_file(out_dir / rel, j);
    mf.artifacts.push_back(rel.generic_string());
}

} // namespace detail

// Everything downstream of the correlation matrices: signs, decomposition,
// hierarchy dump, measure series, trends, reactions. Used by both `analyze`
// (matrices from raw series) and `report` (matrices from saved dumps).
inline void run_analysis_stages(std::span<const CorrelationMatrix> windows,
                                const AnalysisParams& params,
                                const std::filesystem::path& out_dir, RunManifest& mf) {
    namespace fs = std::filesystem;
    detail::require_common_shape(windows);
    fs::create_directories(out_dir / "windows");
    fs::create_directories(out_dir / "series");
    fs::create_directories(out_dir / "plot");

    const std::size_t m = windows.front().size();
    mf.sectors = windows.front().sectors;

    for (const auto& cm : windows) {
        const std::string tag = cm.window.tag();
        mf.window_tags.push_back(tag);
        detail::add_artifact(mf, out_dir, fs::path("windows") / ("corr_" + tag + ".csv"),
                             matrix_csv(cm));

        const SignMatrix sm = sign_matrix(cm, params.zero_tol);
        for (const auto& [i, j] : sm.zero_pairs())
            mf.degenerate_pairs.push_back({cm.window, sm.sectors[i], sm.sectors[j]});
        detail::add_artifact(mf, out_dir, fs::path("windows") / ("signs_" + tag + ".csv"),
                             sign_matrix_csv(sm));

        const PlaquetteDecomposition dec = decompose(sm);
        detail::add_json_artifact(mf, out_dir, fs::path("windows") / ("plaquettes_" + tag + ".json"),
                                  decomposition_json(sm, dec));
        detail::add_json_artifact(mf, out_dir, fs::path("windows") / ("hierarchy_" + tag + ".json"),
                                  hierarchy_json(sm));
    }

    // Full-system measure series and the leave-one-out family.
    const std::vector<HierarchySeries> full = hierarchy_series(windows, m);
    const HierarchySeries& r5 = full.front();
    const std::map<std::string, HierarchySeries> loo = leave_one_out(windows);

    std::vector<HierarchySeries> loo_list;
    for (const auto& [removed, hs] : loo) loo_list.push_back(hs);

    if (wants_csv(params.format)) {
        detail::add_artifact(mf, out_dir, fs::path("series") / "rho_full.csv", series_csv(full));
        detail::add_artifact(mf, out_dir, fs::path("series") / "rho_loo.csv",
                             series_csv(loo_list));
        detail::add_artifact(mf, out_dir, fs::path("plot") / "rho_full.csv", plot_csv(r5));
        for (const auto& [removed, hs] : loo)
            detail::add_artifact(mf, out_dir, fs::path("plot") / ("rho_not_" + removed + ".csv"),
                                 plot_csv(hs));
    }
    if (wants_json(params.format)) {
        detail::add_json_artifact(mf, out_dir, fs::path("series") / "rho_full.json",
                                  series_json(full));
        detail::add_json_artifact(mf, out_dir, fs::path("series") / "rho_loo.json",
                                  series_json(loo_list));
    }

    // Envelope trends per series and side; a side with fewer than two points
    // is noted, not fatal.
    std::vector<LabelledTrend> trends;
    auto try_trend = [&](const HierarchySeries& hs) {
        for (Sign side : {Sign::plus, Sign::minus}) {
            try {
                trends.push_back({hs.label, envelope_trend(hs, side)});
            } catch (const InsufficientDataError&) {
                mf.notes.push_back("trend skipped for " + hs.label + " side " +
                                   sign_char(side) + ": fewer than 2 points");
            }
        }
    };
    try_trend(r5);
    for (const auto& hs : loo_list) try_trend(hs);
    if (wants_csv(params.format))
        detail::add_artifact(mf, out_dir, "trends.csv", trends_csv(trends));
    if (wants_json(params.format))
        detail::add_json_artifact(mf, out_dir, "trends.json", trends_json(trends));

    // Reaction report (needs at least 3 windows for pick detection).
    if (r5.points.size() >= 3) {
        const std::vector<ReactionEvent> events =
            sector_reaction_report(r5, loo, params.eps_frac, params.pick_frac);
        detail::add_json_artifact(mf, out_dir, "reactions.json", reactions_json(events));
        detail::add_artifact(mf, out_dir, "reactions.csv", reactions_csv(events));
    } else {
        mf.notes.push_back("reaction analysis skipped: needs at least 3 windows, have " +
                           std::to_string(r5.points.size()));
    }
}

// ============================================================================
// analyze: raw series in, full artifact tree out
// ============================================================================

inline RunManifest run_pipeline(const RunConfig& cfg, std::ostream* diag = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(cfg);
    if (cfg.out_dir.empty()) throw ValidationError("output directory not set");

    RunManifest mf;
    mf.config_echo = config_echo_json(cfg);

    std::vector<IndexSeries> series;
    series.reserve(cfg.sectors.size());
    for (const auto& [id, path] : cfg.sectors) series.push_back(load_series(path, id));
    if (cfg.fill_forward) series = forward_fill(series, cfg.fill_max_gap_days);

    AlignedPanel panel = align(series);
    if (cfg.log_returns) panel = to_log_returns(panel);

    WindowPartition part = partition_windows(panel, cfg.min_obs);
    mf.skipped_windows = part.skipped;
    if (diag)
        for (const auto& sw : part.skipped)
            *diag << json{{"warning", "skipped_window"},
                          {"year", sw.window.year},
                          {"half", sw.window.half},
                          {"y", sw.window.y()},
                          {"rows", sw.rows},
                          {"reason", sw.reason}}
                         .dump()
                  << "\n";
    if (part.windows.empty()) throw DataError("no window reaches min_obs observations");

    std::vector<CorrelationMatrix> matrices;
    matrices.reserve(part.windows.size());
    for (const auto& wp : part.windows) matrices.push_back(corr_matrix(wp));

    const std::filesystem::path out_dir(cfg.out_dir);
    std::filesystem::create_directories(out_dir);
    AnalysisParams params{cfg.zero_tol, cfg.eps_frac, cfg.pick_frac, cfg.format};
    run_analysis_stages(matrices, params, out_dir, mf);

    write_json_file(out_dir / "manifest.json", manifest_json(mf));
    mf.artifacts.push_back("manifest.json");
    mf.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
    if (diag) *diag << "analyze wall time: " << fmt_fixed(mf.wall_ms, 1) << " ms\n";
    return mf;
}

// ============================================================================
// report: saved matrix dumps in, post-correlation artifacts out
// ============================================================================

// Scans in_dir/windows/corr_<tag>.csv and reruns every downstream stage.
inline RunManifest report_from_matrices(const std::filesystem::path& in_dir,
                                        const AnalysisParams& params,
                                        const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    const fs::path windows_dir = in_dir / "windows";
    if (!fs::is_directory(windows_dir))
        throw DataError("no windows/ directory under " + in_dir.string());

    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(windows_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("corr_", 0) == 0 && name.size() > 9 &&
            name.substr(name.size() - 4) == ".csv")
            names.push_back(name);
    }
    if (names.empty()) throw DataError("no corr_<tag>.csv files under " + windows_dir.string());
    std::sort(names.begin(), names.end());

    std::vector<CorrelationMatrix> matrices;
    for (const auto& name : names) {
        const std::string tag = name.substr(5, name.size() - 9);
        double y = 0.0;
        if (!detail::parse_level(tag, y))
            throw DataError("cannot parse window coordinate from filename " + name);
        std::ifstream in(windows_dir / name);
        if (!in) throw DataError("cannot open " + (windows_dir / name).string());
        matrices.push_back(read_matrix_csv(in, WindowId::from_y(y), name));
    }

    RunManifest mf;
    mf.config_echo = json{{"mode", "report"},
                          {"in_dir", in_dir.generic_string()},
                          {"zero_tol", params.zero_tol},
                          {"eps_frac", params.eps_frac},
                          {"pick_frac", params.pick_frac}};
    fs::create_directories(out_dir);
    run_analysis_stages(matrices, params, out_dir, mf);
    write_json_file(out_dir / "manifest.json", manifest_json(mf));
    mf.artifacts.push_back("manifest.json");
    return mf;
}

// ============================================================================
// demo-table1: the bundled 1987-H2 worked example as executable documentation
// ============================================================================

inline std::string emit_table1_demo(const CorrelationMatrix& cm) {
    const SignMatrix sm = sign_matrix(cm, 0.0);
    const PlaquetteDecomposition dec = decompose(sm);

    std::string out;
    out += "Worked example: window " + cm.window.tag() + " (" + std::to_string(cm.window.year) +
           " H" + std::to_string(cm.window.half) + ")\n";
    out += "Sectors:";
    for (const auto& s : cm.sectors) out += " " + s;
    out += "\n\nPair signs, sign(rho):\n";
    for (std::size_t i = 0; i < cm.size(); ++i)
        for (std::size_t j = i + 1; j < cm.size(); ++j)
            out += "  " + cm.sectors[i] + "-" + cm.sectors[j] + ": " +
                   (sm.is_degenerate(i, j) ? '0' : sign_char(sm.sign(i, j))) +
                   "  (rho = " + fmt_fixed(cm.at(i, j), 3) + ")\n";

    auto plaquette_line = [&](const Plaquette& p) {
        return "    {" + cm.sectors[p.members[0]] + "," + cm.sectors[p.members[1]] + "," +
               cm.sectors[p.members[2]] + "}\n";
    };
    out += "\nPlaquette decomposition: " + std::to_string(dec.transitive.size()) +
           " transitive, " + std::to_string(dec.frustrated.size()) + " frustrated, " +
           std::to_string(dec.degenerate.size()) + " degenerate\n";
    out += "  V_T:\n";
    for (const auto& p : dec.transitive) out += plaquette_line(p);
    out += "  V_F:\n";
    for (const auto& p : dec.frustrated) out += plaquette_line(p);
    out += "Preorder cover by V_T: ";
    out += preorder_cover(dec, cm.size()) ? "true" : "false";
    out += "\n\n";

    auto phi_line = [&](std::span<const std::string> names, const std::string& shown) {
        const SectorSubset s = subset_of(sm, names);
        const Sign phi = phi_direct(sm, s).phi;
        return "Phi_R" + std::to_string(names.size()) + "(" + shown +
               ") = " + (phi == Sign::plus ? "+1" : "-1") + "\n";
    };
    const std::vector<std::string> four_a = {"CRB", "SPX", "USB", "USD"};
    const std::vector<std::string> four_b = {"XAU", "SPX", "USB", "USD"};
    out += phi_line(four_a, "CRB,SPX,USB,USD");
    out += phi_line(four_b, "XAU,SPX,USB,USD");
    out += phi_line(cm.sectors, "S");

    std::vector<std::size_t> all(cm.size());
    for (std::size_t i = 0; i < cm.size(); ++i) all[i] = i;
    const double rho5 = rho_measure(cm, SectorSubset(all)).rho_n;
    out += "rho_R" + std::to_string(cm.size()) + "(S) = " + fmt_rho(rho5) + "\n";

    out += "\nLeave-one-out rho_R" + std::to_string(cm.size() - 1) + ":\n";
    for (std::size_t removed = 0; removed < cm.size(); ++removed) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < cm.size(); ++i)
            if (i != removed) rest.push_back(i);
        const double v = rho_measure(cm, SectorSubset(rest)).rho_n;
        out += "  S\\{" + cm.sectors[removed] + "}: " + fmt_rho(v) + "  (" +
               (v > 0 ? "transitive" : v < 0 ? "frustrated" : "zero") + ")\n";
    }
    return out;
}

} // namespace frust
