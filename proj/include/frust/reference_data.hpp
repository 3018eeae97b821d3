#pragma once

#include <array>
#include <vector>

#include "frust/correlation.hpp"

namespace frust {

// Bundled worked example: half-year Pearson correlations of the five U.S.
// intermarket sectors for 1987. These are the matrices behind the
// `demo-table1` subcommand and the acceptance anchors; the synthetic fixture
// under data/fixture is seeded to reproduce them.

inline const std::vector<std::string>& reference_sectors() {
    static const std::vector<std::string> sectors = {"CRB", "USB", "SPX", "USD", "XAU"};
    return sectors;
}

// Strict lower triangle, row-major: (USB,CRB), (SPX,CRB), (SPX,USB), ...
inline constexpr std::array<double, 10> kReference1987H1 = {
    -0.115,          // USB,CRB
    -0.003, 0.544,   // SPX,CRB  SPX,USB
    -0.380, -0.271, -0.124, // USD,*
    0.401, -0.666, -0.182, -0.195, // XAU,*
};

inline constexpr std::array<double, 10> kReference1987H2 = {
    -0.144,          // USB,CRB
    0.376, 0.617,    // SPX,CRB  SPX,USB
    0.129, -0.085, 0.456,  // USD,*
    0.750, -0.081, 0.235, -0.351, // XAU,*
};

inline CorrelationMatrix reference_matrix_1987h1() {
    return make_corr_matrix(WindowId{1987, 1}, reference_sectors(), kReference1987H1);
}

inline CorrelationMatrix reference_matrix_1987h2() {
    return make_corr_matrix(WindowId{1987, 2}, reference_sectors(), kReference1987H2);
}

} // namespace frust
