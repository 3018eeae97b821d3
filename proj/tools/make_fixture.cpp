// Generates the bundled synthetic fixture under data/fixture/: five daily
// index-level series spanning 1986-07-01 .. 1988-06-30 (four half-year
// windows). Each window's sample correlation matrix is constructed exactly
// (whiten the noise, recolor with the target's Cholesky factor), so the two
// 1987 windows reproduce the bundled reference matrices to ~1e-12 and the
// flanking windows use mild all-positive / one-negative targets that give the
// measure series an interior pick.
//
// Deterministic: fixed seeds, own normal sampler. Usage:
//   make_fixture [out_dir]   (default data/fixture)

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "frust/correlation.hpp"
#include "frust/dates.hpp"
#include "frust/ingest.hpp"
#include "frust/numfmt.hpp"
#include "frust/reference_data.hpp"

namespace {

using frust::Date;

constexpr std::size_t kSectors = 5;
const std::array<const char*, kSectors> kIds = {"CRB", "USB", "SPX", "USD", "XAU"};
const std::array<double, kSectors> kBaseLevels = {250.0, 90.0, 280.0, 100.0, 120.0};

// Flanking-window targets, strict lower triangle (same order as the
// reference constants). Chosen mild so the full-system product stays small
// and the 1987-H2 window becomes the series' dominant interior extremum.
constexpr std::array<double, 10> kTarget1986H2 = {
    0.22,
    0.31, 0.25,
    0.27, 0.26, 0.29,
    0.31, 0.23, 0.24, 0.28,
};
constexpr std::array<double, 10> kTarget1988H1 = {
    -0.30,
    0.24, 0.27,
    0.22, 0.28, 0.25,
    0.26, 0.23, 0.21, 0.29,
};

struct WindowSpec {
    Date first, last;
    std::array<double, 10> lower;
    std::uint64_t seed;
};

// splitmix64; deterministic across platforms.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
};

using Matrix5 = std::array<std::array<double, kSectors>, kSectors>;

Matrix5 full_from_lower(const std::array<double, 10>& lower) {
    Matrix5 c{};
    for (std::size_t i = 0; i < kSectors; ++i) c[i][i] = 1.0;
    std::size_t k = 0;
    for (std::size_t i = 1; i < kSectors; ++i)
        for (std::size_t j = 0; j < i; ++j, ++k) {
            c[i][j] = lower[k];
            c[j][i] = lower[k];
        }
    return c;
}

Matrix5 cholesky(const Matrix5& a, const std::string& what) {
    Matrix5 l{};
    for (std::size_t i = 0; i < kSectors; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i][j];
            for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
            if (i == j) {
                if (sum <= 0.0) {
                    std::cerr << "target matrix " << what << " is not positive definite\n";
                    std::exit(1);
                }
                l[i][i] = std::sqrt(sum);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    return l;
}

// n x 5 column-centered noise, recolored so the sample correlation matrix of
// the output equals `target` up to rounding.
std::vector<std::array<double, kSectors>> correlated_sample(std::size_t n,
                                                            const std::array<double, 10>& target,
                                                            std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::array<double, kSectors>> x(n);
    for (auto& row : x)
        for (auto& v : row) v = rng.normal();

    for (std::size_t c = 0; c < kSectors; ++c) {
        double mean = 0.0;
        for (const auto& row : x) mean += row[c];
        mean /= static_cast<double>(n);
        for (auto& row : x) row[c] -= mean;
    }

    Matrix5 s{};
    for (const auto& row : x)
        for (std::size_t i = 0; i < kSectors; ++i)
            for (std::size_t j = 0; j < kSectors; ++j) s[i][j] += row[i] * row[j];

    const Matrix5 ls = cholesky(s, "sample cross-product");
    const Matrix5 lt = cholesky(full_from_lower(target), "target");

    std::vector<std::array<double, kSectors>> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        // w = Ls^-1 x  (forward substitution), then y = Lt w.
        std::array<double, kSectors> w{};
        for (std::size_t i = 0; i < kSectors; ++i) {
            double sum = x[t][i];
            for (std::size_t k = 0; k < i; ++k) sum -= ls[i][k] * w[k];
            w[i] = sum / ls[i][i];
        }
        for (std::size_t i = 0; i < kSectors; ++i) {
            double sum = 0.0;
            for (std::size_t k = 0; k <= i; ++k) sum += lt[i][k] * w[k];
            y[t][i] = sum;
        }
    }
    return y;
}

std::vector<Date> calendar_days(Date first, Date last) {
    std::vector<Date> out;
    for (long d = frust::day_number(first); d <= frust::day_number(last); ++d)
        out.push_back(frust::date_from_day_number(d));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    namespace fs = std::filesystem;
    const fs::path out_dir = argc > 1 ? argv[1] : "data/fixture";
    fs::create_directories(out_dir);

    const std::vector<WindowSpec> windows = {
        {Date{1986, 7, 1}, Date{1986, 12, 31}, kTarget1986H2, 0x5eed0001},
        {Date{1987, 1, 2}, Date{1987, 6, 30}, frust::kReference1987H1, 0x5eed0002},
        {Date{1987, 7, 1}, Date{1987, 12, 31}, frust::kReference1987H2, 0x5eed0003},
        {Date{1988, 1, 2}, Date{1988, 6, 30}, kTarget1988H1, 0x5eed0004},
    };

    std::array<std::string, kSectors> csv;
    for (std::size_t c = 0; c < kSectors; ++c) csv[c] = "date,value\n";

    double worst = 0.0;
    for (const auto& spec : windows) {
        const auto dates = calendar_days(spec.first, spec.last);
        const auto sample = correlated_sample(dates.size(), spec.lower, spec.seed);

        // Positive affine map to index-like levels; correlations survive it.
        std::vector<std::vector<double>> levels(kSectors,
                                                std::vector<double>(dates.size()));
        for (std::size_t t = 0; t < dates.size(); ++t)
            for (std::size_t c = 0; c < kSectors; ++c) {
                const double level = kBaseLevels[c] * (1.0 + 3.0 * sample[t][c]);
                if (level <= 0.0) {
                    std::cerr << "non-positive level generated; lower the amplitude\n";
                    return 1;
                }
                levels[c][t] = level;
                csv[c] += frust::to_string(dates[t]) + "," + frust::fmt_full(level) + "\n";
            }

        // Self-check: achieved sample correlations vs the target.
        const Matrix5 target = full_from_lower(spec.lower);
        for (std::size_t i = 0; i < kSectors; ++i)
            for (std::size_t j = i + 1; j < kSectors; ++j) {
                const double got = frust::pearson(levels[i], levels[j]);
                worst = std::max(worst, std::abs(got - target[i][j]));
            }
        std::cout << "window " << frust::to_string(spec.first) << " .. "
                  << frust::to_string(spec.last) << ": " << dates.size() << " rows\n";
    }
    std::cout << "max |achieved - target| correlation deviation: " << frust::fmt_sci(worst, 3)
              << "\n";
    if (worst > 1e-9) {
        std::cerr << "deviation too large, fixture rejected\n";
        return 1;
    }

    for (std::size_t c = 0; c < kSectors; ++c) {
        const fs::path path = out_dir / (std::string(kIds[c]) + ".csv");
        std::ofstream out(path, std::ios::binary);
        out << csv[c];
        if (!out) {
            std::cerr << "cannot write " << path << "\n";
            return 1;
        }
        std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}
