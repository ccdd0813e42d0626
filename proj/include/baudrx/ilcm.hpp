#pragma once

#include <stdexcept>

namespace baudrx {

// Injection-locked clock multiplier, modeled at reference-edge granularity.
// Between injections the oscillator free-runs at mult_ratio times its tracked
// reference frequency (the tracking error lives in freq_track_accum, in UI per
// edge); each ungated reference edge realigns the phase by realign_beta and
// trims the tracked frequency from the realignment sign.
struct IlcmState {
    int mult_ratio = 16;
    double realign_beta = 1.0; // (0,1]
    double osc_phase = 0.0;    // UI
    double freq_track_accum = 0.0;
    double trim_gain = 0.0; // UI per edge per injection-sign, 0 disables tracking

    void validate() const {
        if (!(realign_beta > 0.0) || realign_beta > 1.0)
            throw std::invalid_argument("IlcmState: realign_beta outside (0,1]");
    }
};

inline void ilcm_step(IlcmState& s, double ref_edge_phase) {
    s.osc_phase += s.freq_track_accum; // free-run with the tracked rate offset
    const double err = ref_edge_phase - s.osc_phase;
    s.osc_phase += s.realign_beta * err;
    if (s.trim_gain != 0.0)
        s.freq_track_accum += s.trim_gain * (err > 0.0 ? 1.0 : (err < 0.0 ? -1.0 : 0.0));
}

} // namespace baudrx
