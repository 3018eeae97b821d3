#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "frust/frust.hpp"

namespace testutil {

inline frust::IndexSeries make_series(std::string id,
                                      std::vector<std::pair<const char*, double>> rows) {
    frust::IndexSeries s{std::move(id), {}};
    for (const auto& [d, v] : rows) s.observations.push_back({*frust::parse_iso_date(d), v});
    return s;
}

// Random sign matrix on m sectors: each pair -1 or +1 (never degenerate
// unless zero_prob > 0).
inline frust::SignMatrix random_sign_matrix(std::mt19937& rng, std::size_t m,
                                            double zero_prob = 0.0) {
    std::vector<std::string> sectors;
    for (std::size_t i = 0; i < m; ++i) sectors.push_back("S" + std::to_string(i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::int8_t> lower;
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            if (zero_prob > 0.0 && u(rng) < zero_prob)
                lower.push_back(0);
            else
                lower.push_back(u(rng) < 0.5 ? std::int8_t{-1} : std::int8_t{+1});
        }
    return frust::SignMatrix::from_lower_triangle(frust::WindowId{1990, 1}, std::move(sectors),
                                                  lower);
}

// Random correlation values (not necessarily a consistent PSD matrix, which
// none of the sign/product algebra requires).
inline frust::CorrelationMatrix random_corr_matrix(std::mt19937& rng, std::size_t m) {
    std::vector<std::string> sectors;
    for (std::size_t i = 0; i < m; ++i) sectors.push_back("S" + std::to_string(i));
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    std::vector<double> lower;
    for (std::size_t k = 0; k < m * (m - 1) / 2; ++k) {
        double v = u(rng);
        if (v == 0.0) v = 0.5;
        lower.push_back(v);
    }
    return frust::make_corr_matrix(frust::WindowId{1990, 1}, std::move(sectors), lower);
}

// Sign matrix over 3 sectors from explicit pair signs (ab, bc, ac).
inline frust::SignMatrix triangle(std::int8_t ab, std::int8_t bc, std::int8_t ac) {
    // lower triangle order: (1,0)=ab, (2,0)=ac, (2,1)=bc
    const std::int8_t lower[] = {ab, ac, bc};
    return frust::SignMatrix::from_lower_triangle(frust::WindowId{1990, 1}, {"A", "B", "C"},
                                                  lower);
}

inline frust::HierarchySeries make_plain_series(std::vector<std::pair<double, double>> pts) {
    frust::HierarchySeries hs;
    hs.subset = frust::SectorSubset({0, 1});
    hs.label = "A+B";
    for (const auto& [y, v] : pts) hs.points.push_back({y, v});
    return hs;
}

} // namespace testutil
