#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace baudrx {

enum class PdVote { Up, Dn, Hold };

// Modified sign-sign Mueller-Muller phase detector.
//
// Error samples follow e = sign(v - d*Dlev). UP means "sample later". The
// transition patterns are the classic MM pair; the third UP pattern is the
// no-transition case that only discriminates once the DFE has removed the
// post-cursor, which is what makes the UP family larger than the DN family.
//
//   UP:   (-1,+1,-1,-1)  rising, sampled early
//         (+1,-1,+1,+1)  falling, sampled early
//         (+1,+1,+1,-1)  no transition, |h1| < h-1
//   DN:   (-1,+1,+1,+1)  rising, sampled late
//         (+1,-1,-1,-1)  falling, sampled late
//   else: HOLD
inline PdVote mmpd_vote(int d_prev, int d, int e_prev, int e) {
    if (d_prev == -1 && d == +1) {
        if (e_prev == -1 && e == -1)
            return PdVote::Up;
        if (e_prev == +1 && e == +1)
            return PdVote::Dn;
        return PdVote::Hold;
    }
    if (d_prev == +1 && d == -1) {
        if (e_prev == +1 && e == +1)
            return PdVote::Up;
        if (e_prev == -1 && e == -1)
            return PdVote::Dn;
        return PdVote::Hold;
    }
    if (d_prev == +1 && d == +1 && e_prev == +1 && e == -1)
        return PdVote::Up;
    return PdVote::Hold;
}

// Proportional path: weighted majority vote driving the PI code. UP adds 1,
// DN subtracts k_ratio (fractional weights carried exactly); each time the
// accumulator crosses +/-threshold the PI code steps one LSB.
struct ProportionalPath {
    double accum = 0.0;
    int threshold = 16;

    // returns -1, 0 or +1 PI code steps
    int update(PdVote vote, double k_ratio) {
        if (k_ratio <= 0.0)
            throw std::invalid_argument("ProportionalPath: k_ratio must be positive");
        if (vote == PdVote::Up)
            accum += 1.0;
        else if (vote == PdVote::Dn)
            accum -= k_ratio;
        if (accum >= threshold) {
            accum -= threshold;
            return +1;
        }
        if (accum <= -threshold) {
            accum += threshold;
            return -1;
        }
        return 0;
    }
};

} // namespace baudrx
