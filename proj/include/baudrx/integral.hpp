#pragma once

#include <algorithm>
#include <stdexcept>

namespace baudrx {

// Collaborative integral path: accumulates the per-batch phase-error votes of
// every active lane into the fractional division word, so the local PIs see a
// zero-mean frequency error.
struct IntegralConfig {
    bool enabled = true;
    double ki = 1e-5;        // frac units per majority vote
    double clamp = 0.08;     // |freq_accum| limit (~5000 ppm at div 16)

    void validate() const {
        if (!(ki > 0.0) || !(clamp > 0.0))
            throw std::invalid_argument("IntegralConfig: ki and clamp must be positive");
    }
};

struct IntegralPathState {
    double freq_accum = 0.0;
    bool clamped = false; // set when the clamp was hit (loss-of-lock signal)

    // Returns the new frac_ctrl given the nominal fractional word.
    double accumulate(double vote_sum, double nominal_frac, const IntegralConfig& cfg) {
        if (cfg.enabled) {
            freq_accum += cfg.ki * vote_sum;
            if (freq_accum > cfg.clamp) {
                freq_accum = cfg.clamp;
                clamped = true;
            } else if (freq_accum < -cfg.clamp) {
                freq_accum = -cfg.clamp;
                clamped = true;
            }
        }
        return nominal_frac + freq_accum;
    }
};

} // namespace baudrx
