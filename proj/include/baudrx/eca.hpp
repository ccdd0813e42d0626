#pragma once

#include <algorithm>
#include <stdexcept>

namespace baudrx {

// Background eye-climbing algorithm. CLK_ECA is dithered by toggling the delay
// cap every dither_period UIs; Pdlev is averaged over the second half of each
// half-cycle (settling guard) and the up:dn ratio k is stepped in the
// direction that increases Pdlev. Runs continuously.
struct EcaConfig {
    bool enabled = true;
    double delta_ui = 1.0 / 32.0; // CLK_ECA extra delay when the cap is on
    int dither_period = 8192;     // UIs per half-cycle (one cap state)
    double k_init = 1.0;          // starting up:dn ratio (the initial MM lock)
    double k_step = 1.0 / 16.0;
    double k_min = 0.125;
    double k_max = 8.0;
    double deadband = 0.0; // snapshot difference (code LSB) treated as equal

    void validate() const {
        if (k_min > k_max || k_min <= 0.0)
            throw std::invalid_argument("EcaConfig: bad k bounds");
        if (k_init < k_min || k_init > k_max)
            throw std::invalid_argument("EcaConfig: k_init outside bounds");
        if (dither_period < 2)
            throw std::invalid_argument("EcaConfig: dither_period too short");
        if (delta_ui < 0.0)
            throw std::invalid_argument("EcaConfig: negative dither delay");
    }
};

struct EcaState {
    double k_ratio = 1.0;
    bool dither_on = false;
    double pdlev_snapshot_on = 0.0;
    double pdlev_snapshot_off = 0.0;

    long ui_in_phase_ = 0;
    double sum_ = 0.0;
    long count_ = 0;

    double extra_delay(const EcaConfig& cfg) const {
        return dither_on ? cfg.delta_ui : 0.0;
    }

    // Per-UI tick with the current Pdlev code. Returns true when a full on/off
    // cycle completed and k was (possibly) adjusted.
    bool tick(int pdlev_code, const EcaConfig& cfg) {
        if (!cfg.enabled)
            return false;
        if (2 * ui_in_phase_ >= cfg.dither_period) {
            sum_ += pdlev_code;
            ++count_;
        }
        if (++ui_in_phase_ < cfg.dither_period)
            return false;
        // half-cycle boundary
        const double mean = count_ ? sum_ / count_ : 0.0;
        ui_in_phase_ = 0;
        sum_ = 0.0;
        count_ = 0;
        bool adjusted = false;
        if (dither_on) {
            pdlev_snapshot_on = mean;
            // full cycle done: climb
            if (pdlev_snapshot_on > pdlev_snapshot_off + cfg.deadband)
                k_ratio -= cfg.k_step; // eye improves later: shift lock rightward
            else if (pdlev_snapshot_on < pdlev_snapshot_off - cfg.deadband)
                k_ratio += cfg.k_step;
            k_ratio = std::clamp(k_ratio, cfg.k_min, cfg.k_max);
            adjusted = true;
        } else {
            pdlev_snapshot_off = mean;
        }
        dither_on = !dither_on;
        return adjusted;
    }
};

} // namespace baudrx
