#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frust/errors.hpp"
#include "frust/ingest.hpp"

namespace frust {

namespace detail {

struct Moments {
    double mean_x = 0, mean_y = 0;
    double sxx = 0, syy = 0, sxy = 0; // centered sums of squares / products
};

// Two-pass, mean-subtracted. The (n-1) vs n normalization cancels in every
// quantity derived here, so no divisor is applied.
inline Moments centered_moments(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ValidationError("vector lengths differ: " + std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()));
    if (x.size() < 2) throw ValidationError("need at least 2 observations");
    Moments m;
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    m.mean_x = sx / n;
    m.mean_y = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - m.mean_x;
        const double dy = y[i] - m.mean_y;
        m.sxx += dx * dx;
        m.syy += dy * dy;
        m.sxy += dx * dy;
    }
    return m;
}

} // namespace detail

// Sample Pearson coefficient, clamped to [-1, 1] so that downstream sign
// products never see a |rho| overshoot from rounding.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    const auto m = detail::centered_moments(x, y);
    if (m.sxx == 0.0) throw DegenerateDataError("zero variance in first vector");
    if (m.syy == 0.0) throw DegenerateDataError("zero variance in second vector");
    const double r = m.sxy / std::sqrt(m.sxx * m.syy);
    return std::clamp(r, -1.0, 1.0);
}

// Ordinary least-squares line y = slope*x + intercept.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LinearFit ls_fit(std::span<const double> x, std::span<const double> y) {
    const auto m = detail::centered_moments(x, y);
    if (m.sxx == 0.0) throw DegenerateDataError("zero variance in regressor");
    if (m.syy == 0.0) throw DegenerateDataError("zero variance in response");
    const double slope = m.sxy / m.sxx;
    return LinearFit{slope, m.mean_y - slope * m.mean_x};
}

// Substituting f1 into f2: if y = f1(x) and z = f2(y) then z = compose(f1,f2)(x).
// Slope multiplies, so the composed sign is the product of the component signs.
inline LinearFit compose_fits(LinearFit f1, LinearFit f2) {
    return LinearFit{f1.slope * f2.slope, f1.intercept * f2.slope + f2.intercept};
}

// Symmetric per-window Pearson matrix, diagonal exactly 1.
struct CorrelationMatrix {
    WindowId window;
    std::vector<std::string> sectors;
    std::vector<double> rho; // m x m, row-major

    std::size_t size() const { return sectors.size(); }

    double at(std::size_t i, std::size_t j) const { return rho[i * sectors.size() + j]; }

    std::size_t index_of(std::string_view sector) const {
        for (std::size_t i = 0; i < sectors.size(); ++i)
            if (sectors[i] == sector) return i;
        throw ValidationError("unknown sector " + std::string(sector));
    }
};

// Builds a matrix from the strict lower triangle in row-major order:
// (1,0), (2,0), (2,1), (3,0), ... Validates range, symmetrizes, clamps.
inline CorrelationMatrix make_corr_matrix(WindowId window, std::vector<std::string> sectors,
                                          std::span<const double> lower_triangle) {
    const std::size_t m = sectors.size();
    if (m < 2) throw ValidationError("correlation matrix needs at least 2 sectors");
    if (lower_triangle.size() != m * (m - 1) / 2)
        throw ValidationError("lower triangle size mismatch: expected " +
                              std::to_string(m * (m - 1) / 2) + ", got " +
                              std::to_string(lower_triangle.size()));
    CorrelationMatrix cm{window, std::move(sectors), std::vector<double>(m * m, 0.0)};
    for (std::size_t i = 0; i < m; ++i) cm.rho[i * m + i] = 1.0;
    std::size_t k = 0;
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j, ++k) {
            const double v = lower_triangle[k];
            if (!(std::abs(v) <= 1.0 + 1e-12))
                throw ValidationError("correlation out of range at (" + cm.sectors[i] + "," +
                                      cm.sectors[j] + ")");
            const double c = std::clamp(v, -1.0, 1.0);
            cm.rho[i * m + j] = c;
            cm.rho[j * m + i] = c;
        }
    return cm;
}

// All-pairs Pearson over a window panel. A constant column is reported by
// sector name rather than as a bare numeric failure.
inline CorrelationMatrix corr_matrix(const WindowPanel& wp) {
    const std::size_t m = wp.panel.cols();
    if (m < 2) throw ValidationError("window panel needs at least 2 sectors");
    if (wp.panel.rows() < 2) throw ValidationError("window panel needs at least 2 rows");

    std::vector<std::vector<double>> cols(m);
    for (std::size_t c = 0; c < m; ++c) {
        cols[c] = wp.panel.column(c);
        const auto mo = detail::centered_moments(cols[c], cols[c]);
        if (mo.sxx == 0.0)
            throw DegenerateDataError("sector " + wp.panel.sectors[c] +
                                      " has zero variance in window " + wp.window.tag());
    }

    CorrelationMatrix cm{wp.window, wp.panel.sectors, std::vector<double>(m * m, 0.0)};
    for (std::size_t i = 0; i < m; ++i) cm.rho[i * m + i] = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double r = pearson(cols[i], cols[j]);
            cm.rho[i * m + j] = r;
            cm.rho[j * m + i] = r;
        }
    return cm;
}

} // namespace frust
