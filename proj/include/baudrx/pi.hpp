#pragma once

#include <cmath>
#include <stdexcept>

namespace baudrx {

enum class PiMode { Ideal, Diamond };

// Phase interpolator model. Ideal mode spaces codes uniformly; diamond mode
// reproduces the constellation of uniform-weight quadrature interpolation,
// whose intra-quadrant angle is atan2(k, N-k) instead of (pi/2) k/N.
struct PiModel {
    int bits = 8;
    PiMode mode = PiMode::Ideal;

    int codes() const { return 1 << bits; }
    int phases_per_quadrant() const { return 1 << (bits - 2); }
};

inline double pi_phase(int code, const PiModel& model) {
    const int n_codes = model.codes();
    if (code < 0 || code >= n_codes)
        throw std::out_of_range("pi_phase: code out of range");
    if (model.mode == PiMode::Ideal)
        return static_cast<double>(code) / n_codes;
    const int n = model.phases_per_quadrant();
    const int quadrant = code / n;
    const int k = code % n;
    const double frac =
        std::atan2(static_cast<double>(k), static_cast<double>(n - k)) /
        1.57079632679489661923132169164; // pi/2
    return 0.25 * (quadrant + frac);
}

// Deviation of the diamond constellation from ideal at a given code, in UI.
inline double pi_phase_error(int code, const PiModel& model) {
    PiModel ideal = model;
    ideal.mode = PiMode::Ideal;
    PiModel diamond = model;
    diamond.mode = PiMode::Diamond;
    return pi_phase(code, diamond) - pi_phase(code, ideal);
}

} // namespace baudrx
