#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frust/dates.hpp"
#include "frust/errors.hpp"

namespace frust {

// ============================================================================
// Raw series
// ============================================================================

struct Observation {
    Date date;
    double level = 0.0;
};

// One sector's index levels, strictly increasing in date, all levels
// positive and finite, at least two observations.
struct IndexSeries {
    std::string sector_id;
    std::vector<Observation> observations;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

inline bool parse_level(std::string_view field, double& out) {
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

} // namespace detail

inline void validate(const IndexSeries& s) {
    if (s.sector_id.empty()) throw ValidationError("series has empty sector id");
    if (s.observations.size() < 2)
        throw ValidationError("series " + s.sector_id + " needs at least 2 observations, has " +
                              std::to_string(s.observations.size()));
    for (std::size_t i = 0; i < s.observations.size(); ++i) {
        const auto& o = s.observations[i];
        if (!is_valid(o.date))
            throw ValidationError("series " + s.sector_id + " has invalid date " + to_string(o.date));
        if (!std::isfinite(o.level) || o.level <= 0.0)
            throw ValidationError("series " + s.sector_id + " has non-positive level at " +
                                  to_string(o.date));
        if (i > 0 && !(s.observations[i - 1].date < o.date))
            throw ValidationError("series " + s.sector_id + " has duplicate or unordered date " +
                                  to_string(o.date));
    }
}

// Parses the `date,value` CSV format from a stream. Rows may arrive out of
// order; the result is sorted. `source` names the stream in error messages.
inline IndexSeries parse_series_csv(std::istream& in, std::string sector_id,
                                    const std::string& source) {
    IndexSeries series{std::move(sector_id), {}};
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view row{line};
        if (line_no == 1 && row.size() >= 3 && row.substr(0, 3) == "\xEF\xBB\xBF")
            row.remove_prefix(3); // UTF-8 BOM
        row = detail::trim(row);
        if (row.empty()) continue;

        if (!saw_header) {
            if (!detail::iequals(row, "date,value"))
                throw ParseError(source + ": expected header 'date,value'", line_no);
            saw_header = true;
            continue;
        }

        const auto comma = row.find(',');
        if (comma == std::string_view::npos)
            throw ParseError(source + ": row is not 'date,value'", line_no);
        const auto date_field = detail::trim(row.substr(0, comma));
        const auto value_field = detail::trim(row.substr(comma + 1));
        if (value_field.find(',') != std::string_view::npos)
            throw ParseError(source + ": row has more than two fields", line_no);

        const auto date = parse_iso_date(date_field);
        if (!date)
            throw ParseError(source + ": bad ISO-8601 date '" + std::string(date_field) + "'",
                             line_no);
        double level = 0.0;
        if (!detail::parse_level(value_field, level))
            throw ParseError(source + ": bad decimal level '" + std::string(value_field) + "'",
                             line_no);
        if (!std::isfinite(level) || level <= 0.0)
            throw ValidationError(source + ": non-positive level at " + to_string(*date) +
                                  " (line " + std::to_string(line_no) + ")");
        series.observations.push_back({*date, level});
    }
    if (!saw_header) throw ParseError(source + ": empty file, expected header 'date,value'", 1);

    std::stable_sort(series.observations.begin(), series.observations.end(),
                     [](const Observation& a, const Observation& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.observations.size(); ++i)
        if (series.observations[i - 1].date == series.observations[i].date)
            throw ValidationError(source + ": duplicate date " +
                                  to_string(series.observations[i].date));
    validate(series);
    return series;
}

inline IndexSeries load_series(const std::filesystem::path& path, std::string sector_id) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return parse_series_csv(in, std::move(sector_id), path.filename().string());
}

// ============================================================================
// Aligned panel
// ============================================================================

// Date-aligned level matrix: every row complete, one column per sector.
struct AlignedPanel {
    std::vector<std::string> sectors;
    std::vector<Date> dates;
    std::vector<double> values; // row-major, dates.size() x sectors.size()

    std::size_t rows() const { return dates.size(); }
    std::size_t cols() const { return sectors.size(); }

    double at(std::size_t row, std::size_t col) const { return values[row * sectors.size() + col]; }

    std::vector<double> column(std::size_t col) const {
        std::vector<double> out(rows());
        for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, col);
        return out;
    }
};

// Inner join on dates. Column order follows input order.
inline AlignedPanel align(std::span<const IndexSeries> series_list) {
    if (series_list.size() < 3)
        throw ValidationError("alignment needs at least 3 series, got " +
                              std::to_string(series_list.size()));
    std::set<std::string_view> ids;
    for (const auto& s : series_list) {
        validate(s);
        if (!ids.insert(s.sector_id).second)
            throw ValidationError("duplicate sector id " + s.sector_id);
    }

    std::vector<Date> common;
    for (const auto& o : series_list[0].observations) common.push_back(o.date);
    for (std::size_t i = 1; i < series_list.size(); ++i) {
        std::vector<Date> theirs;
        theirs.reserve(series_list[i].observations.size());
        for (const auto& o : series_list[i].observations) theirs.push_back(o.date);
        std::vector<Date> next;
        std::set_intersection(common.begin(), common.end(), theirs.begin(), theirs.end(),
                              std::back_inserter(next));
        common = std::move(next);
    }
    if (common.empty()) throw AlignmentError("series share no common dates");

    AlignedPanel panel;
    for (const auto& s : series_list) panel.sectors.push_back(s.sector_id);
    panel.dates = common;
    panel.values.resize(common.size() * series_list.size());
    for (std::size_t c = 0; c < series_list.size(); ++c) {
        const auto& obs = series_list[c].observations;
        std::size_t j = 0;
        for (std::size_t r = 0; r < common.size(); ++r) {
            while (obs[j].date < common[r]) ++j;
            panel.values[r * series_list.size() + c] = obs[j].level;
        }
    }
    return panel;
}

// Per-column log returns, log(v_t / v_{t-1}); the return carries the later
// date, so the panel loses its first row.
inline AlignedPanel to_log_returns(const AlignedPanel& panel) {
    if (panel.rows() < 2) throw DataError("log returns need at least 2 rows");
    AlignedPanel out;
    out.sectors = panel.sectors;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.values.resize((panel.rows() - 1) * panel.cols());
    for (std::size_t r = 1; r < panel.rows(); ++r)
        for (std::size_t c = 0; c < panel.cols(); ++c) {
            const double prev = panel.at(r - 1, c);
            const double cur = panel.at(r, c);
            if (prev <= 0.0 || cur <= 0.0) throw DataError("log returns need positive levels");
            out.values[(r - 1) * panel.cols() + c] = std::log(cur / prev);
        }
    return out;
}

// Optional missing-data policy: on the union of all observed dates, carry each
// series' last level forward across gaps of at most max_gap_days calendar days.
// Holes wider than the cap stay missing and fall to the inner join.
inline std::vector<IndexSeries> forward_fill(std::span<const IndexSeries> series_list,
                                             int max_gap_days) {
    if (max_gap_days < 0) throw ValidationError("max_gap_days must be non-negative");
    std::set<Date> union_dates;
    for (const auto& s : series_list) {
        validate(s);
        for (const auto& o : s.observations) union_dates.insert(o.date);
    }

    std::vector<IndexSeries> out;
    out.reserve(series_list.size());
    for (const auto& s : series_list) {
        IndexSeries filled{s.sector_id, {}};
        std::size_t j = 0;
        const auto& obs = s.observations;
        for (const Date& d : union_dates) {
            while (j + 1 < obs.size() && obs[j + 1].date <= d) ++j;
            if (obs[j].date == d) {
                filled.observations.push_back(obs[j]);
            } else if (obs[j].date < d &&
                       day_number(d) - day_number(obs[j].date) <= max_gap_days) {
                filled.observations.push_back({d, obs[j].level});
            }
        }
        out.push_back(std::move(filled));
    }
    return out;
}

// ============================================================================
// Half-year windows
// ============================================================================

// Calendar half-year identifier; y() is the figure coordinate (year-1900,
// +0.5 for the second half).
struct WindowId {
    int year = 0;
    int half = 1; // 1: Jan 1 - Jun 30,  2: Jul 1 - Dec 31

    double y() const { return static_cast<double>(year - 1900) + (half == 2 ? 0.5 : 0.0); }

    static WindowId of(Date d) { return WindowId{d.year, half_of_year(d)}; }

    static WindowId from_y(double y) {
        const double whole = std::floor(y);
        const double frac = y - whole;
        WindowId w;
        if (frac == 0.0)
            w.half = 1;
        else if (frac == 0.5)
            w.half = 2;
        else
            throw ValidationError("y coordinate must be an integer or half-integer");
        w.year = 1900 + static_cast<int>(whole);
        return w;
    }

    // Zero-padded fixed-width tag, sorts lexicographically as numerically.
    std::string tag() const {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%05.1f", y());
        return buf;
    }

    auto operator<=>(const WindowId&) const = default;
};

struct WindowPanel {
    WindowId window;
    AlignedPanel panel;
};

struct SkippedWindow {
    WindowId window;
    std::size_t rows = 0;
    std::string reason;
};

struct WindowPartition {
    std::vector<WindowPanel> windows;  // sorted by y coordinate
    std::vector<SkippedWindow> skipped;
};

// Splits a panel into calendar half-year windows. Windows with fewer than
// min_obs rows are not errors; they land in the skipped report.
inline WindowPartition partition_windows(const AlignedPanel& panel, std::size_t min_obs) {
    if (min_obs < 1) throw ValidationError("min_obs must be positive");
    if (panel.rows() == 0) throw ValidationError("panel has no rows");

    std::map<WindowId, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < panel.rows(); ++r)
        groups[WindowId::of(panel.dates[r])].push_back(r);

    WindowPartition part;
    for (const auto& [wid, row_ids] : groups) {
        if (row_ids.size() < min_obs) {
            part.skipped.push_back({wid, row_ids.size(),
                                    "fewer than min_obs=" + std::to_string(min_obs) +
                                        " observations"});
            continue;
        }
        WindowPanel wp;
        wp.window = wid;
        wp.panel.sectors = panel.sectors;
        for (std::size_t r : row_ids) {
            wp.panel.dates.push_back(panel.dates[r]);
            for (std::size_t c = 0; c < panel.cols(); ++c)
                wp.panel.values.push_back(panel.at(r, c));
        }
        part.windows.push_back(std::move(wp));
    }
    return part;
}

} // namespace frust
