#pragma once

#include <cmath>
#include <cstdint>

#include "baudrx/adapt.hpp"
#include "baudrx/afe.hpp"
#include "baudrx/eca.hpp"
#include "baudrx/mmpd.hpp"
#include "baudrx/pi.hpp"
#include "baudrx/prbs.hpp"
#include "baudrx/rng.hpp"
#include "baudrx/waveform.hpp"

namespace baudrx {

// Which level the eye-monitor sampler serves: the proposed pattern-gated Pdlev
// or the prior-art 1:3 biased data level (for comparison runs).
enum class LevelMode { Pdlev, Bdlev };

struct LaneConfig {
    PiModel pi{};
    int prop_threshold = 16;
    int dlev_every = 16;  // SS-LMS gain 1/M: one LSB per M qualifying samples
    int pdlev_every = 4;
    int bdlev_every = 4;
    int dlev_init = 0;
    int pdlev_init = 0;
    LevelMode level_mode = LevelMode::Pdlev;
    bool dfe_adapt = false;
    int dfe_adapt_every = 64;
    EcaConfig eca{};
    JitterSpec jitter{};
    PrbsPoly prbs = PrbsPoly::Prbs7;
};

// Per-lane timing recovery state, advanced one UI at a time. The global clock
// engine supplies base_phase (distributed-clock deviation in UI); the lane adds
// its PI phase and jitter on top.
class Lane {
public:
    Lane(const SingleBitResponse* sbr, const AfeConfig* afe, const LaneConfig* cfg,
         std::uint64_t seed, std::uint32_t prbs_seed)
        : sbr_(sbr), afe_(*afe), cfg_(cfg), noise_rng_(seed),
          jitter_rng_(seed ^ 0x6a09e667f3bcc909ull),
          prbs_(cfg->prbs, prbs_seed), tx_(1024) {
        dlev_code = cfg->dlev_init;
        pdlev_code = cfg->pdlev_init;
        bdlev.code = cfg->pdlev_init;
        bdlev.up_pacer.every = 3 * cfg->bdlev_every;
        bdlev.dn_pacer.every = cfg->bdlev_every;
        dlev_pacer_.every = cfg->dlev_every;
        pdlev_pacer_.every = cfg->pdlev_every;
        dfe_pacer_.every = cfg->dfe_adapt_every;
        prop.threshold = cfg->prop_threshold;
        eca.k_ratio = cfg->eca.k_init;
    }

    // adaptation + PI state
    int dlev_code = 0;
    int pdlev_code = 0;
    BdlevAdapter bdlev{};
    int pi_code = 0;
    long pi_steps = 0; // unwrapped PI steps, for frequency bookkeeping
    ProportionalPath prop{};
    EcaState eca{};
    int d_prev = +1, e_prev = +1; // pd_history
    double batch_vote_sum = 0.0;  // weighted votes since the last batch boundary
    long up_count = 0, dn_count = 0;

    // controls used by the measurement harness
    bool freeze_phase = false;      // stop PI/adaptation updates (bathtub sweeps)
    bool freeze_adaptation = false;
    double forced_offset = 0.0;     // additional sampling offset, UI

    struct StepResult {
        int tx_bit;   // transmitted bit the sample was aligned to
        int decided;  // data decision
        double phase; // total sampling offset used (UI, unwrapped)
    };

    // Advance one UI. base_phase is the distributed-clock deviation in UI.
    StepResult step(std::int64_t n, double base_phase) {
        ensure_bits(n + 4 + static_cast<std::int64_t>(std::ceil(
                            std::abs(cfg_->jitter.sj_amplitude) + 2.0)));
        double phase = base_phase + pi_phase(pi_code, cfg_->pi) + forced_offset;
        if (cfg_->jitter.any())
            phase += jitter_offset(cfg_->jitter, static_cast<std::uint64_t>(n),
                                   ui_seconds, jitter_rng_);

        const int level_code =
            cfg_->level_mode == LevelMode::Pdlev ? pdlev_code : bdlev.code;
        const auto s = sample_three(*sbr_, tx_, n, phase, eca.extra_delay(cfg_->eca),
                                    dlev_code, level_code, decided_prev_, afe_,
                                    noise_rng_);

        if (!freeze_adaptation) {
            if (dlev_pacer_.tick())
                dlev_code = dlev_update(dlev_code, s.d, s.e_pd);
            if (cfg_->level_mode == LevelMode::Pdlev) {
                // pattern (-1,+1,-1) needs the next decision: apply one UI late
                if (pdlev_qualifies(decided_prev2_, decided_prev_, s.d) &&
                    pdlev_pacer_.tick())
                    pdlev_code = pdlev_update(pdlev_code, e_em_prev_);
            } else {
                bdlev.update(s.d, s.e_em);
            }
            if (cfg_->dfe_adapt && dfe_pacer_.tick())
                afe_.dfe_tap = dac_voltage(
                    dfe_tap_update(dfe_tap_code(), decided_prev_, s.e_pd), afe_);
        }

        const PdVote vote = mmpd_vote(d_prev, s.d, e_prev, s.e_pd);
        if (vote == PdVote::Up) {
            ++up_count;
            batch_vote_sum += 1.0;
        } else if (vote == PdVote::Dn) {
            ++dn_count;
            batch_vote_sum -= eca.k_ratio;
        }
        if (!freeze_phase) {
            const int step = prop.update(vote, eca.k_ratio);
            if (step != 0) {
                pi_code = (pi_code + step) & (cfg_->pi.codes() - 1);
                pi_steps += step;
            }
            eca.tick(pdlev_code, cfg_->eca);
        }

        d_prev = s.d;
        e_prev = s.e_pd;
        e_em_prev_ = s.e_em;
        decided_prev2_ = decided_prev_;
        decided_prev_ = s.d;

        StepResult r{};
        // error reference excludes any forced sweep offset so bathtub BER keeps
        // the lock-point bit alignment
        r.tx_bit = tx_.at(n + std::lround(phase - forced_offset));
        r.decided = s.d;
        r.phase = phase;
        return r;
    }

    // DFE-corrected waveform value at an arbitrary offset (eye capture). The
    // correction references the transmitted bit preceding the probed one, so
    // the column shows the post-DFE ISI structure independent of where the
    // lane's own decision pipeline currently sits.
    double probe(std::int64_t n, double phase) const {
        const int bit = static_cast<int>(std::lround(phase));
        return dfe_apply(waveform_value(*sbr_, tx_, n, phase), tx_.at(n + bit - 1),
                         afe_.dfe_tap);
    }
    int tx_bit(std::int64_t n) const { return tx_.at(n); }

    double take_batch_votes() {
        const double v = batch_vote_sum;
        batch_vote_sum = 0.0;
        return v;
    }

    const AfeConfig& afe() const { return afe_; }
    double ui_seconds = 31.25e-12;

private:
    int dfe_tap_code() const {
        return static_cast<int>(std::lround(afe_.dfe_tap / afe_.dac_fullscale * 63.0));
    }
    void ensure_bits(std::int64_t through) {
        while (tx_.next_index() <= through)
            tx_.push(prbs_.next());
    }

    const SingleBitResponse* sbr_;
    AfeConfig afe_;
    const LaneConfig* cfg_;
    Rng noise_rng_;
    Rng jitter_rng_;
    PrbsState prbs_;
    BitHistory tx_;
    LmsPacer dlev_pacer_{}, pdlev_pacer_{}, dfe_pacer_{};
    int decided_prev_ = +1, decided_prev2_ = +1;
    int e_em_prev_ = +1;
};

} // namespace baudrx
