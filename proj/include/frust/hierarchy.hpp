#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "frust/errors.hpp"
#include "frust/relations.hpp"

namespace frust {

// Exhaustive verification stays cheap up to 66 edges; nothing here needs more
// than the 5-sector system anyway.
inline constexpr std::size_t kMaxHierarchyLevel = 12;

// ============================================================================
// Sector subsets
// ============================================================================

// Canonical (sorted, distinct) k-subset of sector indices, 2 <= k <= 12.
class SectorSubset {
public:
    SectorSubset() = default;

    explicit SectorSubset(std::vector<std::size_t> members) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
            throw ValidationError("subset members must be distinct");
        if (members_.size() < 2) throw ValidationError("subset needs at least 2 members");
        if (members_.size() > kMaxHierarchyLevel)
            throw ValidationError("subset exceeds the supported level cap of " +
                                  std::to_string(kMaxHierarchyLevel));
    }

    std::span<const std::size_t> members() const { return members_; }
    std::size_t level() const { return members_.size(); }
    bool contains(std::size_t idx) const {
        return std::binary_search(members_.begin(), members_.end(), idx);
    }

    // The subset with members_[omit] removed.
    SectorSubset without(std::size_t omit) const {
        std::vector<std::size_t> rest;
        rest.reserve(members_.size() - 1);
        for (std::size_t i = 0; i < members_.size(); ++i)
            if (i != omit) rest.push_back(members_[i]);
        return SectorSubset(std::move(rest));
    }

    auto operator<=>(const SectorSubset&) const = default;

private:
    std::vector<std::size_t> members_;
};

inline SectorSubset subset_of(const CorrelationMatrix& cm, std::span<const std::string> names) {
    std::vector<std::size_t> idx;
    idx.reserve(names.size());
    for (const auto& n : names) idx.push_back(cm.index_of(n));
    return SectorSubset(std::move(idx));
}

inline SectorSubset subset_of(const SignMatrix& sm, std::span<const std::string> names) {
    std::vector<std::size_t> idx;
    idx.reserve(names.size());
    for (const auto& n : names) idx.push_back(sm.index_of(n));
    return SectorSubset(std::move(idx));
}

// Visits all k-subsets of {0..m-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t m, std::size_t k, Fn&& fn) {
    if (k > m) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(std::span<const std::size_t>(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// ============================================================================
// Phi indicators
// ============================================================================

struct PhiValue {
    SectorSubset subset;
    std::size_t level = 0;
    Sign phi = Sign::plus;
};

namespace detail {

inline void require_signed(const SignMatrix& sm, std::span<const std::size_t> members) {
    for (std::size_t a = 0; a < members.size(); ++a) {
        if (members[a] >= sm.size())
            throw ValidationError("sector index out of range for sign matrix");
        for (std::size_t b = a + 1; b < members.size(); ++b)
            if (sm.is_degenerate(members[a], members[b]))
                throw DegenerateDataError("pair (" + sm.sectors[members[a]] + "," +
                                          sm.sectors[members[b]] + ") has no sign in window " +
                                          sm.window.tag());
    }
}

inline Sign phi_product_over_pairs(const SignMatrix& sm, std::span<const std::size_t> xs) {
    Sign phi = Sign::plus;
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b) phi *= sm.sign(xs[a], xs[b]);
    return phi;
}

inline Sign phi_by_recurrence(const SignMatrix& sm, std::span<const std::size_t> xs) {
    if (xs.size() == 2) return sm.sign(xs[0], xs[1]);
    const auto head = xs.first(xs.size() - 1);
    Sign phi = phi_by_recurrence(sm, head);
    const std::size_t last = xs.back();
    for (std::size_t xi : head) phi *= sm.sign(xi, last);
    return phi;
}

} // namespace detail

// The +/-1 indicator of an n-subset: the product of all C(n,2) pairwise
// signs. +1 is transitivity, -1 frustration, at every level of the hierarchy.
inline PhiValue phi_direct(const SignMatrix& sm, const SectorSubset& s) {
    detail::require_signed(sm, s.members());
    return PhiValue{s, s.level(), detail::phi_product_over_pairs(sm, s.members())};
}

// Same indicator built by peeling one member at a time:
//   phi(X1..Xn) = phi(X1..X(n-1)) * prod_i sign(Xi, Xn).
// Equal to phi_direct on every subset, exactly; the unit and acceptance
// suites enforce the equality with no tolerance.
inline PhiValue phi_recurrence(const SignMatrix& sm, const SectorSubset& s) {
    detail::require_signed(sm, s.members());
    return PhiValue{s, s.level(), detail::phi_by_recurrence(sm, s.members())};
}

// Memoized recurrence over one window's sign matrix. Higher levels reuse the
// cached lower ones, so a full dump of all 2^m - m - 1 subsets costs one
// multiply per (subset, new edge).
class PhiCache {
public:
    explicit PhiCache(const SignMatrix& sm) : sm_(&sm) {}

    Sign phi(const SectorSubset& s) {
        detail::require_signed(*sm_, s.members());
        return phi_cached(std::vector<std::size_t>(s.members().begin(), s.members().end()));
    }

private:
    Sign phi_cached(const std::vector<std::size_t>& xs) {
        if (xs.size() == 2) return sm_->sign(xs[0], xs[1]);
        if (auto it = memo_.find(xs); it != memo_.end()) return it->second;
        std::vector<std::size_t> head(xs.begin(), xs.end() - 1);
        Sign phi = phi_cached(head);
        for (std::size_t xi : head) phi *= sm_->sign(xi, xs.back());
        memo_.emplace(xs, phi);
        return phi;
    }

    const SignMatrix* sm_;
    std::map<std::vector<std::size_t>, Sign> memo_;
};

// ============================================================================
// n-ary transitivity and the superposition identity
// ============================================================================

// Both sides of the leave-one-out superposition identity on n+1 points
// (X0, X1..Xn): lhs is the product of the n level-n phis that contain X0,
// rhs the phi of the n points without X0.
//
// Edge counting decides when the identity can fail: across lhs*rhs every
// pair appears n-1 times, so for odd n the identity holds for every sign
// assignment, while for even n it reduces to the product of ALL pair signs
// over the n+1 points and generic assignments break it.
struct SuperpositionCheck {
    Sign lhs = Sign::plus;
    Sign rhs = Sign::plus;
    bool holds = true;
};

inline SuperpositionCheck superposition_check(const SignMatrix& sm,
                                              std::span<const std::size_t> points, std::size_t n) {
    if (n < 2) throw ValidationError("superposition check needs level n >= 2");
    if (points.size() != n + 1)
        throw ValidationError("superposition check needs n+1 points, got " +
                              std::to_string(points.size()));
    {
        std::vector<std::size_t> sorted(points.begin(), points.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ValidationError("superposition points must be distinct");
        detail::require_signed(sm, sorted);
    }

    auto phi_without = [&](std::size_t omit) {
        std::vector<std::size_t> rest;
        rest.reserve(n);
        for (std::size_t i = 0; i < points.size(); ++i)
            if (i != omit) rest.push_back(points[i]);
        return detail::phi_product_over_pairs(sm, rest);
    };

    SuperpositionCheck out;
    out.lhs = Sign::plus;
    for (std::size_t i = 1; i <= n; ++i) out.lhs *= phi_without(i);
    out.rhs = phi_without(0);
    out.holds = out.lhs == out.rhs;
    return out;
}

// The (n+1)-point complex is transitive with respect to the n-ary relation
// exactly when the superposition identity holds on it; otherwise it is
// frustrated at level n.
inline bool nary_transitive(const SignMatrix& sm, std::span<const std::size_t> points,
                            std::size_t n) {
    return superposition_check(sm, points, n).holds;
}

// The n leave-one-out (n-1)-level values whose conjunction defines n-level
// membership; ordered by the omitted member's position in the canonical
// subset.
inline std::vector<PhiValue> conjunction_relation(const SignMatrix& sm, const SectorSubset& s) {
    if (s.level() < 3) throw ValidationError("conjunction relation needs |s| >= 3");
    detail::require_signed(sm, s.members());
    std::vector<PhiValue> out;
    out.reserve(s.level());
    for (std::size_t omit = 0; omit < s.level(); ++omit) {
        SectorSubset rest = s.without(omit);
        out.push_back(PhiValue{rest, rest.level(),
                               detail::phi_product_over_pairs(sm, rest.members())});
    }
    return out;
}

} // namespace frust
