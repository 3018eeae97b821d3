#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "frust/correlation.hpp"
#include "frust/errors.hpp"
#include "frust/measures.hpp"
#include "frust/relations.hpp"

namespace frust {

// ============================================================================
// State classification
// ============================================================================

// T above the zero band, F below it, Z inside.
enum class StateClass { T, F, Z };

inline StateClass classify_state(double value, double eps) {
    if (!(eps > 0.0)) throw ValidationError("state epsilon must be positive");
    if (value > eps) return StateClass::T;
    if (value < -eps) return StateClass::F;
    return StateClass::Z;
}

constexpr std::string_view state_label(StateClass s) {
    switch (s) {
        case StateClass::T: return "T";
        case StateClass::F: return "F";
        default: return "0";
    }
}

// ============================================================================
// Picks
// ============================================================================

// Interior local extremum whose magnitude clears the threshold.
struct Pick {
    double y = 0.0;
    double value = 0.0;
    Sign polarity = Sign::plus; // sign(value)
    double prominence = 0.0;    // |value| - max(|left|, |right|), floored at 0
};

inline std::vector<Pick> detect_picks(const HierarchySeries& series, double threshold) {
    if (!(threshold > 0.0)) throw ValidationError("pick threshold must be positive");
    if (series.points.size() < 3)
        throw ValidationError("pick detection needs at least 3 points, got " +
                              std::to_string(series.points.size()));

    std::vector<Pick> picks;
    for (std::size_t i = 1; i + 1 < series.points.size(); ++i) {
        const double prev = series.points[i - 1].value;
        const double cur = series.points[i].value;
        const double next = series.points[i + 1].value;
        const bool local_max = cur > prev && cur > next;
        const bool local_min = cur < prev && cur < next;
        if (!local_max && !local_min) continue;
        if (std::abs(cur) < threshold) continue;
        Pick p;
        p.y = series.points[i].y;
        p.value = cur;
        p.polarity = sign_of(cur); // threshold > 0 rules out cur == 0
        p.prominence = std::max(0.0, std::abs(cur) - std::max(std::abs(prev), std::abs(next)));
        picks.push_back(p);
    }
    return picks;
}

// ============================================================================
// Reaction taxonomy
// ============================================================================

// The seven possible reactions of a pick's state when one sector is removed.
enum class Reaction {
    invariant,
    f_to_t,
    t_to_f,
    f_to_zero,
    t_to_zero,
    zero_to_f,
    zero_to_t,
};

inline Reaction classify_reaction(StateClass before, StateClass after) {
    if (before == after) return Reaction::invariant;
    if (before == StateClass::F) return after == StateClass::T ? Reaction::f_to_t : Reaction::f_to_zero;
    if (before == StateClass::T) return after == StateClass::F ? Reaction::t_to_f : Reaction::t_to_zero;
    return after == StateClass::F ? Reaction::zero_to_f : Reaction::zero_to_t;
}

constexpr std::string_view reaction_label(Reaction r) {
    switch (r) {
        case Reaction::invariant: return "Invariant";
        case Reaction::f_to_t: return "F->T";
        case Reaction::t_to_f: return "T->F";
        case Reaction::f_to_zero: return "F->0";
        case Reaction::t_to_zero: return "T->0";
        case Reaction::zero_to_f: return "0->F";
        default: return "0->T";
    }
}

// What the removed sector was doing to the full system. A pick that loses
// its frustration when the sector leaves marks that sector as the source of
// the frustration, and symmetrically for the other cases.
constexpr std::string_view reaction_interpretation(Reaction r) {
    switch (r) {
        case Reaction::invariant: return "No active";
        case Reaction::f_to_t:
        case Reaction::f_to_zero: return "Frustration's generator";
        case Reaction::t_to_f:
        case Reaction::t_to_zero: return "Transitivity's generator";
        case Reaction::zero_to_f: return "Frustration's annihilator";
        default: return "Transitivity's annihilator";
    }
}

// One classified pick for one removed sector: before is the state of the
// scaled full-system measure, after the state of the reduced system's.
struct ReactionEvent {
    std::string sector;
    double y = 0.0;
    StateClass before = StateClass::Z;
    StateClass after = StateClass::Z;
    Reaction reaction = Reaction::invariant;
};

// ============================================================================
// Envelope trends
// ============================================================================

// OLS line through the points of one polarity only.
struct TrendLine {
    double slope = 0.0;
    double intercept = 0.0;
    Sign side = Sign::plus;
};

inline TrendLine envelope_trend(const HierarchySeries& series, Sign side) {
    std::vector<double> ys, vs;
    for (const auto& p : series.points) {
        if (p.value == 0.0) continue;
        if (sign_of(p.value) != side) continue;
        ys.push_back(p.y);
        vs.push_back(p.value);
    }
    if (ys.size() < 2)
        throw InsufficientDataError(std::string("fewer than 2 points with sign ") +
                                    sign_char(side) + " in series " + series.label);
    const LinearFit fit = [&] {
        const auto m = detail::centered_moments(ys, vs);
        if (m.sxx == 0.0) throw DegenerateDataError("trend points share one y coordinate");
        const double slope = m.sxy / m.sxx;
        return LinearFit{slope, m.mean_y - slope * m.mean_x};
    }();
    return TrendLine{fit.slope, fit.intercept, side};
}

// ============================================================================
// Per-sector reaction report
// ============================================================================

namespace detail {

inline std::size_t index_of_y(const HierarchySeries& s, double y) {
    for (std::size_t i = 0; i < s.points.size(); ++i)
        if (s.points[i].y == y) return i;
    throw ValidationError("y coordinate not on the series grid");
}

} // namespace detail

// For every removed sector: overlay-scale the full-system series onto the
// reduced one, take the union of both series' pick locations, and classify
// the (before, after) states at each. The zero band and pick thresholds are
// fractions of each series' own max magnitude, so the report is invariant
// under rescaling the measures.
inline std::vector<ReactionEvent> sector_reaction_report(
    const HierarchySeries& full_series, const std::map<std::string, HierarchySeries>& reduced,
    double eps_frac, double pick_threshold_frac) {
    if (!(eps_frac > 0.0 && eps_frac < 1.0))
        throw ValidationError("eps_frac must be in (0,1)");
    if (!(pick_threshold_frac > 0.0 && pick_threshold_frac < 1.0))
        throw ValidationError("pick_threshold_frac must be in (0,1)");

    std::vector<ReactionEvent> events;
    for (const auto& [sector, r4] : reduced) {
        if (r4.points.size() != full_series.points.size())
            throw ValidationError("series for " + sector + " disagrees with the full grid");

        const HierarchySeries scaled = scale_overlay(full_series, r4);

        // A flat-zero series classifies as Z everywhere; any positive band works.
        const double r4_max = r4.max_abs();
        const double eps = eps_frac * (r4_max > 0.0 ? r4_max : 1.0);

        std::vector<double> pick_ys;
        auto collect = [&](const HierarchySeries& s) {
            const double s_max = s.max_abs();
            if (s_max == 0.0 || s.points.size() < 3) return;
            for (const auto& p : detect_picks(s, pick_threshold_frac * s_max))
                pick_ys.push_back(p.y);
        };
        collect(scaled);
        collect(r4);
        std::sort(pick_ys.begin(), pick_ys.end());
        pick_ys.erase(std::unique(pick_ys.begin(), pick_ys.end()), pick_ys.end());

        for (double y : pick_ys) {
            const std::size_t i = detail::index_of_y(r4, y);
            ReactionEvent ev;
            ev.sector = sector;
            ev.y = y;
            ev.before = classify_state(scaled.points[i].value, eps);
            ev.after = classify_state(r4.points[i].value, eps);
            ev.reaction = classify_reaction(ev.before, ev.after);
            events.push_back(std::move(ev));
        }
    }
    return events;
}

} // namespace frust
