#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frust/correlation.hpp"
#include "frust/errors.hpp"

namespace frust {

// ============================================================================
// Sign algebra
// ============================================================================

enum class Sign : int { minus = -1, plus = +1 };

constexpr Sign operator*(Sign a, Sign b) {
    return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b));
}

constexpr Sign& operator*=(Sign& a, Sign b) { return a = a * b; }

constexpr int to_int(Sign s) { return static_cast<int>(s); }

constexpr Sign negate(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

// Caller guarantees v != 0.
constexpr Sign sign_of(double v) { return v < 0.0 ? Sign::minus : Sign::plus; }

constexpr char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

// ============================================================================
// The binary sign relation
// ============================================================================

// Pairwise correlation signs for one window. Pairs whose |rho| fell inside
// the zero tolerance band carry no sign; they are stored as 0 cells and
// surface through zero_pairs()/is_degenerate().
struct SignMatrix {
    WindowId window;
    std::vector<std::string> sectors;
    std::vector<std::int8_t> cells; // m x m of {-1, 0, +1}, diagonal +1

    std::size_t size() const { return sectors.size(); }

    std::int8_t raw(std::size_t i, std::size_t j) const { return cells[i * sectors.size() + j]; }

    bool is_degenerate(std::size_t i, std::size_t j) const { return raw(i, j) == 0; }

    Sign sign(std::size_t i, std::size_t j) const {
        const std::int8_t v = raw(i, j);
        if (v == 0)
            throw DegenerateDataError("pair (" + sectors[i] + "," + sectors[j] +
                                      ") has no sign in window " + window.tag());
        return v > 0 ? Sign::plus : Sign::minus;
    }

    std::vector<std::pair<std::size_t, std::size_t>> zero_pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (is_degenerate(i, j)) out.emplace_back(i, j);
        return out;
    }

    std::size_t index_of(std::string_view sector) const {
        for (std::size_t i = 0; i < sectors.size(); ++i)
            if (sectors[i] == sector) return i;
        throw ValidationError("unknown sector " + std::string(sector));
    }

    // Builds directly from the strict lower triangle in row-major order,
    // entries in {-1, 0, +1}. Mostly for tests and enumeration drivers.
    static SignMatrix from_lower_triangle(WindowId window, std::vector<std::string> sectors,
                                          std::span<const std::int8_t> lower_triangle) {
        const std::size_t m = sectors.size();
        if (lower_triangle.size() != m * (m - 1) / 2)
            throw ValidationError("lower triangle size mismatch");
        SignMatrix sm{window, std::move(sectors), std::vector<std::int8_t>(m * m, 0)};
        for (std::size_t i = 0; i < m; ++i) sm.cells[i * m + i] = +1;
        std::size_t k = 0;
        for (std::size_t i = 1; i < m; ++i)
            for (std::size_t j = 0; j < i; ++j, ++k) {
                const std::int8_t v = lower_triangle[k];
                if (v < -1 || v > 1) throw ValidationError("sign cells must be -1, 0 or +1");
                sm.cells[i * m + j] = v;
                sm.cells[j * m + i] = v;
            }
        return sm;
    }
};

// sign(rho) per pair; |rho| <= zero_tol leaves the pair unsigned.
inline SignMatrix sign_matrix(const CorrelationMatrix& cm, double zero_tol = 0.0) {
    if (!(zero_tol >= 0.0)) throw ValidationError("zero_tol must be non-negative");
    const std::size_t m = cm.size();
    SignMatrix sm{cm.window, cm.sectors, std::vector<std::int8_t>(m * m, 0)};
    for (std::size_t i = 0; i < m; ++i) sm.cells[i * m + i] = +1;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double r = cm.at(i, j);
            std::int8_t s = 0;
            if (r > zero_tol)
                s = +1;
            else if (r < -zero_tol)
                s = -1;
            sm.cells[i * m + j] = s;
            sm.cells[j * m + i] = s;
        }
    return sm;
}

// ============================================================================
// Plaquettes
// ============================================================================

// Unordered triple of sector indices, stored sorted so that the sign product
// is permutation-invariant by construction.
struct Plaquette {
    std::array<std::size_t, 3> members{};

    static Plaquette of(std::size_t a, std::size_t b, std::size_t c) {
        Plaquette p{{a, b, c}};
        std::sort(p.members.begin(), p.members.end());
        if (p.members[0] == p.members[1] || p.members[1] == p.members[2])
            throw ValidationError("plaquette members must be distinct");
        return p;
    }

    auto operator<=>(const Plaquette&) const = default;
};

// Product of the three pairwise signs: +1 transitive, -1 frustrated.
inline Sign plaquette_phi(const SignMatrix& sm, Plaquette p) {
    const auto [a, b, c] = p.members;
    return sm.sign(a, b) * sm.sign(b, c) * sm.sign(a, c);
}

inline bool is_transitive_triple(const SignMatrix& sm, Plaquette p) {
    return plaquette_phi(sm, p) == Sign::plus;
}

// V partitioned by the triangle sign product; triples touching an unsigned
// pair are kept out of both V_T and V_F.
struct PlaquetteDecomposition {
    std::vector<Plaquette> transitive;
    std::vector<Plaquette> frustrated;
    std::vector<Plaquette> degenerate;
};

inline PlaquetteDecomposition decompose(const SignMatrix& sm) {
    PlaquetteDecomposition dec;
    const std::size_t m = sm.size();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            for (std::size_t c = b + 1; c < m; ++c) {
                const Plaquette p{{a, b, c}};
                if (sm.is_degenerate(a, b) || sm.is_degenerate(b, c) || sm.is_degenerate(a, c)) {
                    dec.degenerate.push_back(p);
                } else if (plaquette_phi(sm, p) == Sign::plus) {
                    dec.transitive.push_back(p);
                } else {
                    dec.frustrated.push_back(p);
                }
            }
    return dec;
}

// True iff the transitive plaquettes jointly mention every sector, which is
// what upgrades the restricted relation to a preorder on the full set.
inline bool preorder_cover(const PlaquetteDecomposition& dec, std::size_t sector_count) {
    std::vector<bool> seen(sector_count, false);
    for (const auto& p : dec.transitive)
        for (std::size_t idx : p.members)
            if (idx < sector_count) seen[idx] = true;
    for (bool b : seen)
        if (!b) return false;
    return sector_count > 0;
}

} // namespace frust
