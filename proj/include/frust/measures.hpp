#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "frust/correlation.hpp"
#include "frust/errors.hpp"
#include "frust/hierarchy.hpp"

namespace frust {

// ============================================================================
// Continuous transitivity measures
// ============================================================================

// rho_Rn of one subset in one window: the product of all pairwise Pearson
// coefficients. The sign reproduces phi, the magnitude says how much.
struct MeasureValue {
    WindowId window;
    SectorSubset subset;
    double rho_n = 0.0;
};

inline MeasureValue rho_measure(const CorrelationMatrix& cm, const SectorSubset& s) {
    for (std::size_t idx : s.members())
        if (idx >= cm.size()) throw ValidationError("sector index out of range for matrix");

    std::vector<double> pair_values;
    pair_values.reserve(s.level() * (s.level() - 1) / 2);
    const auto xs = s.members();
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b) pair_values.push_back(cm.at(xs[a], xs[b]));

    // Multiply in descending |rho| order; plain products keep the sign exact
    // and the worst case (|rho|^66) stays far inside double range.
    std::sort(pair_values.begin(), pair_values.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    double prod = 1.0;
    for (double v : pair_values) prod *= v;
    return MeasureValue{cm.window, s, prod};
}

// ============================================================================
// Series over windows
// ============================================================================

struct SeriesPoint {
    double y = 0.0;
    double value = 0.0;
};

// One subset's measure traced across all available windows.
struct HierarchySeries {
    SectorSubset subset;
    std::string label; // member names joined with '+'
    std::vector<SeriesPoint> points;

    double max_abs() const {
        double m = 0.0;
        for (const auto& p : points) m = std::max(m, std::abs(p.value));
        return m;
    }
};

namespace detail {

inline std::string subset_label(std::span<const std::string> sectors, const SectorSubset& s) {
    std::string out;
    for (std::size_t idx : s.members()) {
        if (!out.empty()) out += '+';
        out += sectors[idx];
    }
    return out;
}

inline void require_common_shape(std::span<const CorrelationMatrix> windows) {
    if (windows.empty()) throw ValidationError("no windows given");
    for (const auto& cm : windows)
        if (cm.sectors != windows.front().sectors)
            throw ValidationError("windows disagree on the sector list");
    for (std::size_t i = 1; i < windows.size(); ++i)
        if (!(windows[i - 1].window.y() < windows[i].window.y()))
            throw ValidationError("windows must be strictly increasing in y");
}

} // namespace detail

// One series per k-subset, subsets in lexicographic index order.
inline std::vector<HierarchySeries> hierarchy_series(std::span<const CorrelationMatrix> windows,
                                                     std::size_t level) {
    detail::require_common_shape(windows);
    const std::size_t m = windows.front().size();
    if (level < 2 || level > m)
        throw ValidationError("series level must be between 2 and the sector count");

    std::vector<HierarchySeries> out;
    for_each_subset(m, level, [&](std::span<const std::size_t> idx) {
        HierarchySeries hs;
        hs.subset = SectorSubset(std::vector<std::size_t>(idx.begin(), idx.end()));
        hs.label = detail::subset_label(windows.front().sectors, hs.subset);
        for (const auto& cm : windows)
            hs.points.push_back({cm.window.y(), rho_measure(cm, hs.subset).rho_n});
        out.push_back(std::move(hs));
    });
    return out;
}

// The rho_R(m-1) series of S minus one sector, keyed by the removed sector.
inline std::map<std::string, HierarchySeries> leave_one_out(
    std::span<const CorrelationMatrix> windows) {
    detail::require_common_shape(windows);
    const std::size_t m = windows.front().size();
    if (m < 3) throw ValidationError("leave-one-out needs at least 3 sectors");

    std::map<std::string, HierarchySeries> out;
    for (std::size_t removed = 0; removed < m; ++removed) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < m; ++i)
            if (i != removed) rest.push_back(i);
        HierarchySeries hs;
        hs.subset = SectorSubset(std::move(rest));
        hs.label = detail::subset_label(windows.front().sectors, hs.subset);
        for (const auto& cm : windows)
            hs.points.push_back({cm.window.y(), rho_measure(cm, hs.subset).rho_n});
        out.emplace(windows.front().sectors[removed], std::move(hs));
    }
    return out;
}

// Rescales base by one global factor max|target| / max|base| so the two
// series live on the same magnitude scale. Signs and the argmax of |value|
// are untouched. A flat-zero base passes through unchanged.
inline HierarchySeries scale_overlay(const HierarchySeries& base, const HierarchySeries& target) {
    if (base.points.size() != target.points.size())
        throw ValidationError("overlay series have different lengths");
    for (std::size_t i = 0; i < base.points.size(); ++i)
        if (base.points[i].y != target.points[i].y)
            throw ValidationError("overlay series disagree on the y grid");

    const double base_max = base.max_abs();
    const double factor = base_max == 0.0 ? 1.0 : target.max_abs() / base_max;
    HierarchySeries out = base;
    for (auto& p : out.points) p.value *= factor;
    return out;
}

} // namespace frust
