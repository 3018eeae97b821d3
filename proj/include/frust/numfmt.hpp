#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace frust {

// Deterministic, locale-free numeric formatting for the flat-file outputs.

inline std::string fmt_fixed(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, v);
    return buf;
}

inline std::string fmt_sci(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", places, v);
    return buf;
}

// Shortest round-trippable representation, for fixture levels.
inline std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// rho-style values span roughly 1e-7 .. 1: fixed six decimals in the readable
// range, scientific below it so tiny products keep their digits.
inline std::string fmt_rho(double v) {
    if (v == 0.0) return "0.000000";
    if (std::abs(v) < 1e-4) return fmt_sci(v, 6);
    return fmt_fixed(v, 6);
}

inline std::string fmt_y(double y) { return fmt_fixed(y, 1); }

} // namespace frust
