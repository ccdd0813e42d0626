#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace baudrx {

struct BathtubPoint {
    double phase_ui;   // offset from the lock phase
    double ber;        // observed errors / bits
    double ber_upper;  // Wilson upper bound (rule-of-three for zero errors)
    std::uint64_t bits;
    std::uint64_t errors;
};

struct BathtubCurve {
    std::vector<BathtubPoint> points;

    void write_csv(std::ostream& out) const {
        out << "phase_ui,ber,ber_upper,bits,errors\n";
        for (const auto& p : points)
            out << p.phase_ui << ',' << p.ber << ',' << p.ber_upper << ',' << p.bits
                << ',' << p.errors << '\n';
    }
};

// Wilson score upper bound at ~95%; error-free points report 3/N.
inline double ber_upper_bound(std::uint64_t errors, std::uint64_t bits) {
    if (bits == 0)
        throw std::invalid_argument("ber_upper_bound: zero bits");
    if (errors == 0)
        return 3.0 / static_cast<double>(bits);
    const double z = 1.96;
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    const double denom = 1.0 + z * z / n;
    const double center = p + z * z / (2.0 * n);
    const double rad = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    return (center + rad) / denom;
}

} // namespace baudrx
