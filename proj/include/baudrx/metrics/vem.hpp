#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "baudrx/sbr.hpp"

namespace baudrx {

// Effective UI-spaced cursors at sampling phase phi, with the DFE-cancelled
// post-cursor replaced by its residual (h1 - tap). Index 0 of the result is
// the cursor at sbr.min_cursor().
struct CursorSet {
    std::vector<double> h;
    int first; // cursor index of h[0]

    int center() const { return -first; } // position of h(0) within h
};

inline CursorSet effective_cursors(const SingleBitResponse& sbr, double dfe_tap,
                                   double phase) {
    CursorSet cs;
    cs.first = sbr.min_cursor();
    const int n = sbr.max_cursor() - sbr.min_cursor() + 1;
    cs.h.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int k = cs.first + i;
        double v = sbr.cursor_at_phase(k, phase);
        if (k == 1)
            v -= dfe_tap;
        cs.h[static_cast<std::size_t>(i)] = v;
    }
    return cs;
}

// Level of the "+1" symbol class for one ISI sign assignment, accumulated
// left-to-right so that the enumerating oracle and the closed-form route
// produce bit-identical doubles. pattern bit i (skipping the center cursor)
// selects the sign of neighbor cursor i.
inline double eye_level_for_pattern(const CursorSet& cs, unsigned pattern) {
    double v = 0.0;
    unsigned bit = 0;
    for (std::size_t i = 0; i < cs.h.size(); ++i) {
        if (static_cast<int>(i) == cs.center()) {
            v += cs.h[i];
        } else {
            const int x = (pattern >> bit) & 1u ? +1 : -1;
            v += x * cs.h[i];
            ++bit;
        }
    }
    return v;
}

// Adversarial sign assignment: every neighbor cursor pulls the level down.
inline unsigned worst_case_pattern(const CursorSet& cs) {
    unsigned pattern = 0;
    unsigned bit = 0;
    for (std::size_t i = 0; i < cs.h.size(); ++i) {
        if (static_cast<int>(i) == cs.center())
            continue;
        if (cs.h[i] < 0.0)
            pattern |= 1u << bit;
        ++bit;
    }
    return pattern;
}

// Worst-case single-sided vertical eye margin at one phase: the lowest level
// the "+1" class can take, h0 - |h1 - tap| - sum |h_k|.
inline double vem_at_phase(const SingleBitResponse& sbr, double dfe_tap, double phase) {
    const CursorSet cs = effective_cursors(sbr, dfe_tap, phase);
    return eye_level_for_pattern(cs, worst_case_pattern(cs));
}

inline std::vector<std::pair<double, double>>
vem_vs_phase(const SingleBitResponse& sbr, double dfe_tap,
             const std::vector<double>& phases) {
    std::vector<std::pair<double, double>> out;
    out.reserve(phases.size());
    for (double p : phases)
        out.emplace_back(p, vem_at_phase(sbr, dfe_tap, p));
    return out;
}

// Independent route: try every ISI pattern and keep the minimum level.
inline double vem_by_enumeration(const SingleBitResponse& sbr, double dfe_tap,
                                 double phase) {
    const CursorSet cs = effective_cursors(sbr, dfe_tap, phase);
    const int neighbors = static_cast<int>(cs.h.size()) - 1;
    if (neighbors > 24)
        throw std::invalid_argument("vem_by_enumeration: span too large");
    double worst = eye_level_for_pattern(cs, 0);
    for (unsigned pat = 1; pat < (1u << neighbors); ++pat)
        worst = std::min(worst, eye_level_for_pattern(cs, pat));
    return worst;
}

// Phase of maximum VEM over a search grid, refined with a golden-section pass.
inline double vem_argmax(const SingleBitResponse& sbr, double dfe_tap, double lo,
                         double hi, int grid = 512) {
    double best_p = lo, best_v = -1e300;
    for (int i = 0; i <= grid; ++i) {
        const double p = lo + (hi - lo) * i / grid;
        const double v = vem_at_phase(sbr, dfe_tap, p);
        if (v > best_v) {
            best_v = v;
            best_p = p;
        }
    }
    double a = best_p - (hi - lo) / grid, b = best_p + (hi - lo) / grid;
    for (int it = 0; it < 60; ++it) {
        const double m1 = a + 0.381966011250105 * (b - a);
        const double m2 = b - 0.381966011250105 * (b - a);
        if (vem_at_phase(sbr, dfe_tap, m1) < vem_at_phase(sbr, dfe_tap, m2))
            a = m1;
        else
            b = m2;
    }
    return 0.5 * (a + b);
}

// Conventional SS-MMPD lock target: the phase where the residual post-cursor
// equals the precursor, h1(phi) - tap = h(-1)(phi). Bisected over [lo, hi];
// throws if no sign change is bracketed.
inline double mm_crossing_phase(const SingleBitResponse& sbr, double dfe_tap, double lo,
                                double hi, int grid = 512) {
    auto g = [&](double p) {
        return (sbr.cursor_at_phase(1, p) - dfe_tap) - sbr.cursor_at_phase(-1, p);
    };
    double pa = lo, ga = g(lo);
    bool found = false;
    double a = 0, b = 0;
    for (int i = 1; i <= grid; ++i) {
        const double pb = lo + (hi - lo) * i / grid;
        const double gb = g(pb);
        if (ga == 0.0) {
            return pa;
        }
        if ((ga > 0) != (gb > 0)) {
            a = pa;
            b = pb;
            found = true;
            break;
        }
        pa = pb;
        ga = gb;
    }
    if (!found)
        throw std::runtime_error("mm_crossing_phase: no h1=h-1 crossing in range");
    for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        if ((g(a) > 0) != (g(m) > 0))
            b = m;
        else
            a = m;
    }
    return 0.5 * (a + b);
}

} // namespace baudrx
