#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace baudrx {

// --- delta-sigma modulator -------------------------------------------------

struct DsmOut {
    int carry;      // added to the MMD modulus this cycle
    double residue; // phase-domain quantization error, in T_LC units, to cancel
};

// First-order DSM: residue is exactly the accumulator value after the carry.
inline DsmOut dsm_step(double frac, double& accum) {
    if (frac < 0.0 || frac >= 1.0)
        throw std::invalid_argument("dsm_step: frac outside [0,1)");
    accum += frac;
    const double c = std::floor(accum);
    accum -= c;
    return {static_cast<int>(c), accum};
}

// --- multi-modulus divider ---------------------------------------------------

// Four divide-by-2/3 cells: seamless modulus range 8..32.
inline double mmd_divide(int modulus, double t_lc) {
    if (modulus < 8 || modulus > 32)
        throw std::out_of_range("mmd_divide: modulus outside 8..32");
    return modulus * t_lc;
}

// --- digitally controlled delay line ----------------------------------------

// True (simulated) delay-line law: linear gain plus a configurable INL bow.
// The 9-bit control code covers one T_LC when k_true ~ T_LC/512.
struct DcdlPlant {
    double k_true = 62.5e-12 / 512.0; // seconds per LSB
    double inl_peak_lsb = 0.73;       // smooth bow, peak deviation in LSB

    double delay(int dcw) const {
        const double x = dcw / 511.0;
        return k_true * (dcw + inl_peak_lsb * 4.0 * x * (1.0 - x));
    }
};

// Control-code generation: required delay = residue * T_LC, divided by the
// calibrated gain estimate. Clamps to 9 bits and flags range exhaustion.
inline int dcdl_code(double residue, double k_dcdl, double t_lc, bool* range_flag) {
    if (!(k_dcdl > 0.0))
        throw std::invalid_argument("dcdl_code: k_dcdl must be positive");
    const double want = residue * t_lc / k_dcdl;
    long code = std::lround(want);
    if (code < 0 || code > 511) {
        if (range_flag)
            *range_flag = true;
        code = std::clamp(code, 0l, 511l);
    }
    return static_cast<int>(code);
}

// --- bang-bang phase detector ------------------------------------------------

enum class BbVote { Early, Late };

// Sign of the time difference between two edges; ties resolve Early.
inline BbVote bbpd_vote(double edge_a_time, double edge_b_time) {
    return edge_a_time <= edge_b_time ? BbVote::Early : BbVote::Late;
}

// --- DCDL gain calibration -----------------------------------------------------

// Sign-sign LMS on the correlation between period error and dcw change:
//   k[n+1] = k[n] - mu * err_sign * sign(dcw[n] - dcw[n-1])
// err_sign is the !!PD comparison of successive FDIV output periods.
inline double kdcdl_calibrate(double k_dcdl, int err_sign, int dcw, int dcw_prev,
                              double mu, double k_floor, bool* floor_flag) {
    if (!(mu > 0.0))
        throw std::invalid_argument("kdcdl_calibrate: mu must be positive");
    const int dsign = (dcw > dcw_prev) - (dcw < dcw_prev);
    double k = k_dcdl - mu * err_sign * dsign;
    if (k <= k_floor) {
        k = k_floor;
        if (floor_flag)
            *floor_flag = true;
    }
    return k;
}

// --- integrated fractional divider -------------------------------------------

struct FdivConfig {
    int div_int = 16;
    double t_lc = 62.5e-12; // LC clock period (16 GHz)
    DcdlPlant plant{};
    double k_dcdl_init = 62.5e-12 / 512.0;
    double mu = 0.0;      // calibration step, seconds; 0 disables
    double k_floor = 1e-15;
    // !!PD sensitivity: period differences below this many nominal DCDL LSBs do
    // not vote. Keeps the correlator from chasing code-rounding noise.
    double bb_deadband_lsb = 2.0;

    double bb_deadband_seconds() const { return bb_deadband_lsb * t_lc / 512.0; }

    void validate() const {
        if (div_int < 8 || div_int > 32)
            throw std::invalid_argument("FdivConfig: div_int outside 8..32");
        if (!(t_lc > 0.0))
            throw std::invalid_argument("FdivConfig: t_lc must be positive");
    }
};

struct FdivState {
    double frac_ctrl = 0.0; // fractional part of the division ratio (integral path)
    double dsm_accum = 0.0;
    double k_dcdl = 0.0;
    int dcw = 0;
    int dcw_prev = 0;
    int dcw_prev2 = 0;
    double mmd_time = 0.0;     // accumulated raw MMD edge time
    double out_edge = 0.0;     // last delayed output edge
    double out_edge_prev = 0.0;
    double period_prev = 0.0;
    long edges = 0;
    bool range_clamped = false;
    bool k_floored = false;

    void reset(const FdivConfig& cfg, double frac0) {
        *this = FdivState{};
        k_dcdl = cfg.k_dcdl_init;
        frac_ctrl = frac0;
    }
};

struct FdivEdge {
    double time;    // output edge time, seconds
    double period;  // vs previous output edge (0 for the first)
    int carry;
    int dcw;
    int modulus;
};

// Produce one FDIV output edge. The division ratio is div_int + frac_ctrl;
// frac_ctrl outside [0,1) borrows into the integer modulus.
inline FdivEdge fdiv_step(FdivState& s, const FdivConfig& cfg) {
    double shift = std::floor(s.frac_ctrl);
    double frac = s.frac_ctrl - shift;
    if (frac >= 1.0) { // tiny negatives round up to exactly 1.0
        frac -= 1.0;
        shift += 1.0;
    }
    const auto dsm = dsm_step(frac, s.dsm_accum);
    const int modulus = cfg.div_int + static_cast<int>(shift) + dsm.carry;
    s.mmd_time += mmd_divide(modulus, cfg.t_lc);

    s.dcw_prev2 = s.dcw_prev;
    s.dcw_prev = s.dcw;
    s.dcw = dcdl_code(dsm.residue, s.k_dcdl, cfg.t_lc, &s.range_clamped);

    s.out_edge_prev = s.out_edge;
    s.out_edge = s.mmd_time + cfg.plant.delay(s.dcw);
    const double period = s.edges > 0 ? s.out_edge - s.out_edge_prev : 0.0;

    if (cfg.mu > 0.0 && s.edges >= 2) {
        // !!PD on successive periods, correlated with the older dcw step
        const double derr = period - s.period_prev;
        const double db = cfg.bb_deadband_seconds();
        const int err_sign = (derr > db) - (derr < -db);
        if (err_sign != 0)
            s.k_dcdl = kdcdl_calibrate(s.k_dcdl, err_sign, s.dcw_prev, s.dcw_prev2,
                                       cfg.mu, cfg.k_floor, &s.k_floored);
    }
    s.period_prev = period;
    ++s.edges;
    return {s.out_edge, period, dsm.carry, s.dcw, modulus};
}

} // namespace baudrx
