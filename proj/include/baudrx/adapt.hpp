#pragma once

#include <algorithm>

namespace baudrx {

// Integer dither-free SS-LMS: the loop gain is realized by applying a +/-1 LSB
// step only every `every`-th qualifying sample.
struct LmsPacer {
    int every = 1;
    int count = 0;

    bool tick() {
        if (++count >= every) {
            count = 0;
            return true;
        }
        return false;
    }
};

inline int clamp_code(int code) { return std::clamp(code, 0, 63); }

// Dlev adapts to the data level h0. e_pd = sign(v - d*Dlev), so d*e_pd says
// whether the sampled magnitude was above the current level.
inline int dlev_update(int dlev_code, int d, int e_pd) {
    return clamp_code(dlev_code + (d * e_pd > 0 ? +1 : -1));
}

// Pdlev adapts only on the decided pattern (-1,+1,-1); the center bit is +1 so
// e_em directly says whether the sampled voltage was above Pdlev. Fixed point
// is the pattern-conditioned level h0 - h1 - h(-1).
inline bool pdlev_qualifies(int x_prev, int x_cur, int x_next) {
    return x_prev == -1 && x_cur == +1 && x_next == -1;
}

inline int pdlev_update(int pdlev_code, int e_em) {
    return clamp_code(pdlev_code + (e_em > 0 ? +1 : -1));
}

// Baseline biased data level (comparison only): 1:3 up/down weighting makes the
// code settle at the 25th percentile of the sampled level distribution, i.e.
// the lower level h0 - h(-1) in the noiseless bimodal case. The weighting is
// realized by pacing up-steps 3x slower than down-steps.
struct BdlevAdapter {
    int code = 0;
    LmsPacer up_pacer{3, 0};
    LmsPacer dn_pacer{1, 0};

    void update(int d, int e) {
        const bool above = d * e > 0;
        if (above) {
            if (up_pacer.tick())
                code = clamp_code(code + 1);
        } else {
            if (dn_pacer.tick())
                code = clamp_code(code - 1);
        }
    }
};

// Optional SS-LMS adaptation of the quantized DFE tap toward the residual
// post-cursor null: step by sign(e_pd * d_prev).
inline int dfe_tap_update(int tap_code, int d_prev, int e_pd) {
    return clamp_code(tap_code + (e_pd * d_prev > 0 ? +1 : -1));
}

} // namespace baudrx
