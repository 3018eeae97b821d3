#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frust/analysis.hpp"
#include "frust/correlation.hpp"
#include "frust/errors.hpp"
#include "frust/hierarchy.hpp"
#include "frust/measures.hpp"
#include "frust/numfmt.hpp"
#include "frust/relations.hpp"

namespace frust {

using json = nlohmann::json;

// ============================================================================
// Matrix dump (CSV, header row/column of sector ids, 6 decimal places)
// ============================================================================

inline std::string matrix_csv(const CorrelationMatrix& cm) {
    std::string out;
    for (const auto& s : cm.sectors) out += "," + s;
    out += "\n";
    for (std::size_t i = 0; i < cm.size(); ++i) {
        out += cm.sectors[i];
        for (std::size_t j = 0; j < cm.size(); ++j) out += "," + fmt_fixed(cm.at(i, j), 6);
        out += "\n";
    }
    return out;
}

// Parses the matrix dump format back. Used by the `report` subcommand, so it
// tolerates hand-authored files: requires a square table, symmetry to 1e-9
// and a unit diagonal to 1e-9, then renormalizes both exactly.
inline CorrelationMatrix read_matrix_csv(std::istream& in, WindowId window,
                                         const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(source + ": empty matrix file", 1);
    ++line_no;

    std::vector<std::string> sectors;
    {
        std::stringstream header(line);
        std::string cell;
        bool first = true;
        while (std::getline(header, cell, ',')) {
            if (first) {
                first = false; // corner cell, usually empty
                continue;
            }
            sectors.push_back(std::string(detail::trim(cell)));
            if (sectors.back().empty())
                throw ParseError(source + ": empty sector name in matrix header", 1);
        }
    }
    const std::size_t m = sectors.size();
    if (m < 2) throw ParseError(source + ": matrix header names fewer than 2 sectors", 1);

    std::vector<double> rho(m * m, 0.0);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        if (row >= m) throw ParseError(source + ": more rows than header sectors", line_no);
        std::stringstream ss(line);
        std::string cell;
        if (!std::getline(ss, cell, ','))
            throw ParseError(source + ": missing row label", line_no);
        if (std::string(detail::trim(cell)) != sectors[row])
            throw ParseError(source + ": row label '" + cell + "' does not match header order",
                             line_no);
        for (std::size_t j = 0; j < m; ++j) {
            if (!std::getline(ss, cell, ','))
                throw ParseError(source + ": row has too few cells", line_no);
            double v = 0.0;
            const auto field = detail::trim(cell);
            if (!detail::parse_level(field, v))
                throw ParseError(source + ": bad numeric cell '" + std::string(field) + "'",
                                 line_no);
            rho[row * m + j] = v;
        }
        ++row;
    }
    if (row != m) throw ParseError(source + ": fewer rows than header sectors", line_no);

    std::vector<double> lower;
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(rho[i * m + j] - rho[j * m + i]) > 1e-9)
                throw ParseError(source + ": matrix is not symmetric at (" + sectors[i] + "," +
                                     sectors[j] + ")",
                                 line_no);
            lower.push_back(rho[i * m + j]);
        }
    for (std::size_t i = 0; i < m; ++i)
        if (std::abs(rho[i * m + i] - 1.0) > 1e-9)
            throw ParseError(source + ": diagonal entry for " + sectors[i] + " is not 1", line_no);
    return make_corr_matrix(window, std::move(sectors), lower);
}

// ============================================================================
// Sign matrix dump
// ============================================================================

inline std::string sign_matrix_csv(const SignMatrix& sm) {
    std::string out;
    for (const auto& s : sm.sectors) out += "," + s;
    out += "\n";
    for (std::size_t i = 0; i < sm.size(); ++i) {
        out += sm.sectors[i];
        for (std::size_t j = 0; j < sm.size(); ++j)
            out += "," + std::to_string(static_cast<int>(sm.raw(i, j)));
        out += "\n";
    }
    return out;
}

// ============================================================================
// JSON reports
// ============================================================================

inline json window_json(WindowId w) {
    return json{{"year", w.year}, {"half", w.half}, {"y", w.y()}};
}

inline json plaquette_names(const SignMatrix& sm, const Plaquette& p) {
    return json::array(
        {sm.sectors[p.members[0]], sm.sectors[p.members[1]], sm.sectors[p.members[2]]});
}

inline json decomposition_json(const SignMatrix& sm, const PlaquetteDecomposition& dec) {
    json out;
    out["window"] = window_json(sm.window);
    out["sectors"] = sm.sectors;
    auto names = [&](const std::vector<Plaquette>& ps) {
        json arr = json::array();
        for (const auto& p : ps) arr.push_back(plaquette_names(sm, p));
        return arr;
    };
    out["transitive"] = names(dec.transitive);
    out["frustrated"] = names(dec.frustrated);
    out["degenerate"] = names(dec.degenerate);
    out["counts"] = {{"transitive", dec.transitive.size()},
                     {"frustrated", dec.frustrated.size()},
                     {"degenerate", dec.degenerate.size()}};
    out["preorder_cover"] = preorder_cover(dec, sm.size());
    return out;
}

// All subsets by level with phi and the per-level transitivity flag, plus the
// leave-one-out superposition triple for every subset of size >= 3.
inline json hierarchy_json(const SignMatrix& sm) {
    const std::size_t m = sm.size();
    PhiCache cache(sm);

    auto member_names = [&](std::span<const std::size_t> idx) {
        json arr = json::array();
        for (std::size_t i : idx) arr.push_back(sm.sectors[i]);
        return arr;
    };
    auto subset_degenerate = [&](std::span<const std::size_t> idx) {
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b)
                if (sm.is_degenerate(idx[a], idx[b])) return true;
        return false;
    };

    json out;
    out["window"] = window_json(sm.window);
    out["sectors"] = sm.sectors;
    json levels = json::array();
    for (std::size_t k = 2; k <= m; ++k) {
        json level;
        level["level"] = k;
        json subsets = json::array();
        for_each_subset(m, k, [&](std::span<const std::size_t> idx) {
            json entry;
            entry["members"] = member_names(idx);
            if (subset_degenerate(idx)) {
                entry["degenerate"] = true;
            } else {
                const Sign phi =
                    cache.phi(SectorSubset(std::vector<std::size_t>(idx.begin(), idx.end())));
                entry["phi"] = to_int(phi);
                entry["transitive"] = phi == Sign::plus;
            }
            subsets.push_back(std::move(entry));
        });
        level["subsets"] = std::move(subsets);
        levels.push_back(std::move(level));
    }
    out["levels"] = std::move(levels);

    json checks = json::array();
    for (std::size_t k = 3; k <= m; ++k) {
        for_each_subset(m, k, [&](std::span<const std::size_t> idx) {
            if (subset_degenerate(idx)) return;
            const auto sc = superposition_check(sm, idx, k - 1);
            json entry;
            entry["members"] = member_names(idx);
            entry["n"] = k - 1;
            entry["lhs"] = to_int(sc.lhs);
            entry["rhs"] = to_int(sc.rhs);
            entry["holds"] = sc.holds;
            checks.push_back(std::move(entry));
        });
    }
    out["superposition_checks"] = std::move(checks);
    return out;
}

// ============================================================================
// Series exports
// ============================================================================

inline std::string series_csv(std::span<const HierarchySeries> series_list) {
    std::string out = "y,subset,level,rho_n\n";
    for (const auto& hs : series_list)
        for (const auto& p : hs.points)
            out += fmt_y(p.y) + "," + hs.label + "," + std::to_string(hs.subset.level()) + "," +
                   fmt_rho(p.value) + "\n";
    return out;
}

inline json series_json(std::span<const HierarchySeries> series_list) {
    json arr = json::array();
    for (const auto& hs : series_list) {
        json entry;
        entry["label"] = hs.label;
        entry["level"] = hs.subset.level();
        json pts = json::array();
        for (const auto& p : hs.points) pts.push_back(json{{"y", p.y}, {"value", p.value}});
        entry["points"] = std::move(pts);
        arr.push_back(std::move(entry));
    }
    return json{{"series", std::move(arr)}};
}

// One series per file, bare y,value rows for plotting tools.
inline std::string plot_csv(const HierarchySeries& hs) {
    std::string out = "y,value\n";
    for (const auto& p : hs.points) out += fmt_y(p.y) + "," + fmt_rho(p.value) + "\n";
    return out;
}

// ============================================================================
// Trends and reactions
// ============================================================================

struct LabelledTrend {
    std::string series;
    TrendLine trend;
};

inline std::string trends_csv(std::span<const LabelledTrend> trends) {
    std::string out = "series,side,slope,intercept\n";
    for (const auto& t : trends)
        out += t.series + "," + sign_char(t.trend.side) + "," + fmt_rho(t.trend.slope) + "," +
               fmt_rho(t.trend.intercept) + "\n";
    return out;
}

inline json trends_json(std::span<const LabelledTrend> trends) {
    json arr = json::array();
    for (const auto& t : trends)
        arr.push_back(json{{"series", t.series},
                           {"side", std::string(1, sign_char(t.trend.side))},
                           {"slope", t.trend.slope},
                           {"intercept", t.trend.intercept}});
    return json{{"trends", std::move(arr)}};
}

inline json reactions_json(std::span<const ReactionEvent> events) {
    json arr = json::array();
    for (const auto& ev : events)
        arr.push_back(json{{"sector", ev.sector},
                           {"y", ev.y},
                           {"before", std::string(state_label(ev.before))},
                           {"after", std::string(state_label(ev.after))},
                           {"reaction", std::string(reaction_label(ev.reaction))},
                           {"interpretation", std::string(reaction_interpretation(ev.reaction))}});
    return arr;
}

inline std::string reactions_csv(std::span<const ReactionEvent> events) {
    std::string out = "sector,y,before,after,reaction\n";
    for (const auto& ev : events)
        out += ev.sector + "," + fmt_y(ev.y) + "," + std::string(state_label(ev.before)) + "," +
               std::string(state_label(ev.after)) + "," + std::string(reaction_label(ev.reaction)) +
               "\n";
    return out;
}

// ============================================================================
// File helpers
// ============================================================================

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed for " + path.string());
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

} // namespace frust
