#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace baudrx {

struct JtolPoint {
    double sj_frequency;  // Hz
    double sj_amplitude;  // max UI sustaining the target BER
    bool converged = true;
};

struct JtolCurve {
    std::vector<JtolPoint> points;

    void write_csv(std::ostream& out) const {
        out << "sj_frequency_hz,sj_amplitude_ui,converged\n";
        for (const auto& p : points)
            out << p.sj_frequency << ',' << p.sj_amplitude << ',' << (p.converged ? 1 : 0)
                << '\n';
    }
};

// Least-squares fit of log10(amplitude) vs log10(frequency) over a point range;
// returns dB/decade (20 * slope of log-log amplitude).
inline double jtol_slope_db_per_decade(const JtolCurve& c, std::size_t first,
                                       std::size_t last) {
    if (last <= first || last >= c.points.size())
        throw std::invalid_argument("jtol_slope: bad range");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(last - first + 1);
    for (std::size_t i = first; i <= last; ++i) {
        const double x = std::log10(c.points[i].sj_frequency);
        const double y = std::log10(c.points[i].sj_amplitude);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return 20.0 * slope;
}

// Corner frequency from fitting A(f) = floor * sqrt(1 + (fc/f)^2): the corner
// is where the tracking asymptote meets the high-frequency floor.
inline double jtol_corner_hz(const JtolCurve& c) {
    if (c.points.size() < 3)
        throw std::invalid_argument("jtol_corner: need at least 3 points");
    const double floor_amp = c.points.back().sj_amplitude;
    if (!(floor_amp > 0.0))
        throw std::invalid_argument("jtol_corner: bad floor");
    // average f * sqrt((A/floor)^2 - 1) over points clearly above the floor
    double acc = 0.0;
    int n = 0;
    for (const auto& p : c.points) {
        const double r = p.sj_amplitude / floor_amp;
        if (r > 1.5) {
            acc += p.sj_frequency * std::sqrt(r * r - 1.0);
            ++n;
        }
    }
    if (n == 0)
        throw std::runtime_error("jtol_corner: no points above the floor");
    return acc / n;
}

} // namespace baudrx
