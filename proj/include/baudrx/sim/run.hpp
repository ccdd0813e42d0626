#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "baudrx/fdiv.hpp"
#include "baudrx/ilcm.hpp"
#include "baudrx/integral.hpp"
#include "baudrx/lane.hpp"
#include "baudrx/metrics/eye.hpp"
#include "baudrx/sim/config.hpp"
#include "baudrx/sim/report.hpp"

namespace baudrx {

inline constexpr int kBatchUi = 32; // deserialization ratio: one digital word

// One scenario = one sequential timeline: four lanes stepped UI by UI, with the
// global clock path (integral accumulate -> FDIV -> ILCM) serviced at every
// 32-UI batch boundary.
class SimEngine {
public:
    explicit SimEngine(const ScenarioConfig& cfg)
        : cfg_(cfg), sbr_(cfg.make_sbr()), afe_(cfg.make_afe()),
          lane_cfg_(cfg.make_lane()), fdiv_cfg_(cfg.make_fdiv()),
          integral_cfg_(cfg.make_integral()) {
        cfg_.validate();
        t_ui_data_ = cfg_.clock_ui_ps * 1e-12 * (1.0 + cfg_.clock_ppm_offset * 1e-6);
        t_out_req_ = kBatchUi * t_ui_data_;
        fdiv_.reset(fdiv_cfg_, cfg_.fdiv_nominal_frac);
        lanes_.reserve(static_cast<std::size_t>(cfg_.run_lanes));
        for (int i = 0; i < cfg_.run_lanes; ++i) {
            const std::uint64_t lane_seed =
                Rng(cfg_.run_seed).fork(static_cast<std::uint64_t>(i)).next_u64();
            const std::uint32_t prbs_seed =
                static_cast<std::uint32_t>(0x5D5D ^ (0x9e37 * (i + 1)));
            lanes_.emplace_back(std::make_unique<Lane>(&sbr_, &afe_, &lane_cfg_,
                                                       lane_seed, prbs_seed));
            lanes_.back()->ui_seconds = t_ui_data_;
            IlcmState ilcm;
            ilcm.realign_beta = cfg_.ilcm_beta;
            ilcm.trim_gain = cfg_.ilcm_trim_gain;
            ilcm.validate();
            ilcms_.push_back(ilcm);
        }
        meas_.assign(lanes_.size(), LaneAccum{});
        if (cfg_.run_eye_decimate > 0) {
            double span = 0.0;
            for (int k = sbr_.min_cursor(); k <= sbr_.max_cursor(); ++k)
                span += std::abs(sbr_.h(k));
            eye_ = EyeDiagram(64, 256, -1.2 * span, 1.2 * span);
        }
    }

    // --- stepping -------------------------------------------------------------

    void advance_ui(long n_ui, bool measuring) {
        for (long i = 0; i < n_ui; ++i) {
            if (ui_in_batch_ == 0)
                batch_boundary();
            step_one_ui(measuring);
        }
    }

    void warmup() { advance_ui(cfg_.run_warmup_ui, false); }

    void freeze(bool phase, bool adaptation) {
        for (auto& l : lanes_) {
            l->freeze_phase = phase;
            l->freeze_adaptation = adaptation;
        }
    }

    void set_forced_offset(double ui) {
        for (auto& l : lanes_)
            l->forced_offset = ui;
    }

    // --- full scenario ----------------------------------------------------------

    RunReport run() {
        warmup();
        begin_measurement();
        advance_ui(cfg_.run_n_ui - cfg_.run_warmup_ui, true);
        // pin the eye's lock column to the measured mean, not the final step
        if (eye_)
            eye_->lock_phase_bin = eye_->phase_bin(meas_[0].circular_mean());
        return report();
    }

    void begin_measurement() {
        for (std::size_t i = 0; i < lanes_.size(); ++i) {
            meas_[i] = LaneAccum{};
            meas_[i].phase_start = unwrapped_phase(static_cast<int>(i));
        }
        ratio_edges_start_ = fdiv_.edges;
        ratio_time_start_ = fdiv_.out_edge;
        measure_ui_ = 0;
    }

    RunReport report() const {
        RunReport r;
        r.config_hash = config_hash(cfg_);
        r.seed = cfg_.run_seed;
        r.n_ui = cfg_.run_n_ui;
        r.warmup_ui = cfg_.run_warmup_ui;
        r.lanes = cfg_.run_lanes;
        r.measured_ui = measure_ui_;
        for (std::size_t i = 0; i < lanes_.size(); ++i) {
            const Lane& l = *lanes_[i];
            const LaneAccum& m = meas_[i];
            LaneReport lr;
            lr.lock_phase_ui = m.circular_mean();
            lr.dlev_code = l.dlev_code;
            lr.pdlev_code = l.pdlev_code;
            lr.bdlev_code = l.bdlev.code;
            lr.dlev_volts = dac_voltage(l.dlev_code, afe_);
            lr.pdlev_volts = dac_voltage(l.pdlev_code, afe_);
            lr.bdlev_volts = dac_voltage(l.bdlev.code, afe_);
            lr.k_ratio = l.eca.k_ratio;
            lr.bits = m.bits;
            lr.errors = m.errors;
            lr.ber = m.bits ? static_cast<double>(m.errors) / m.bits : 0.0;
            lr.up_votes = l.up_count;
            lr.dn_votes = l.dn_count;
            lr.residual_ppm =
                measure_ui_ > 0
                    ? (unwrapped_phase(static_cast<int>(i)) - m.phase_start) /
                          static_cast<double>(measure_ui_) * 1e6
                    : 0.0;
            r.lane.push_back(lr);
        }
        const long edges = fdiv_.edges - ratio_edges_start_;
        r.mean_div_ratio = edges > 0 ? (fdiv_.out_edge - ratio_time_start_) /
                                           (edges * fdiv_cfg_.t_lc)
                                     : 0.0;
        r.frac_ctrl = fdiv_.frac_ctrl;
        r.freq_accum = integral_.freq_accum;
        r.k_dcdl = fdiv_.k_dcdl;
        r.k_dcdl_rel_err = fdiv_.k_dcdl / fdiv_cfg_.plant.k_true - 1.0;
        r.loss_of_lock = integral_.clamped;
        if (integral_.clamped)
            r.flags.push_back("integral_clamped");
        if (fdiv_.range_clamped)
            r.flags.push_back("dcdl_range_clamped");
        if (fdiv_.k_floored)
            r.flags.push_back("k_dcdl_floored");
        r.integral_settle_batch = settle_batch();
        return r;
    }

    // --- accessors for experiments ---------------------------------------------

    Lane& lane(int i) { return *lanes_[static_cast<std::size_t>(i)]; }
    const ScenarioConfig& config() const { return cfg_; }

    // Optional decimated telemetry sinks (CSV), written while stepping.
    void set_lane_telemetry(std::ostream* out) {
        lane_telemetry_ = out;
        if (out)
            *out << "ui,lane,pi_code,dlev_code,pdlev_code,k_ratio,up_votes,dn_votes\n";
    }
    void set_fdiv_telemetry(std::ostream* out) {
        fdiv_telemetry_ = out;
        if (out)
            *out << "batch,frac_ctrl,dcw,k_dcdl,carry_density\n";
    }
    const SingleBitResponse& sbr() const { return sbr_; }
    const AfeConfig& afe() const { return afe_; }
    const FdivState& fdiv() const { return fdiv_; }
    const IntegralPathState& integral() const { return integral_; }
    const std::vector<double>& spectrum_capture() const { return theta_; }
    const std::vector<double>& freq_accum_trace() const { return accum_trace_; }
    const EyeDiagram* eye() const { return eye_ ? &*eye_ : nullptr; }
    std::int64_t now() const { return n_; }
    // both capture streams are sampled once per FDIV output edge
    double spectrum_sample_rate() const { return 1.0 / t_out_req_; }

    // Bit/error counts and mean phases over an ad-hoc measurement segment.
    struct SegmentStats {
        std::uint64_t bits = 0, errors = 0; // lane 0
        std::vector<double> lock_phase;     // per lane, circular mean in [0,1)

        double ber() const {
            return bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0;
        }
    };

    SegmentStats measure_segment(long n_ui) {
        begin_measurement();
        advance_ui(n_ui, true);
        SegmentStats s;
        s.bits = meas_[0].bits;
        s.errors = meas_[0].errors;
        for (const auto& m : meas_)
            s.lock_phase.push_back(m.circular_mean());
        return s;
    }

    std::vector<double> probe_lock_phase(long n_ui) {
        return measure_segment(n_ui).lock_phase;
    }

    // current unwrapped lane phase, UI (global deviation + PI steps)
    double unwrapped_phase(int i) const {
        const Lane& l = *lanes_[static_cast<std::size_t>(i)];
        return dev_ui_ + static_cast<double>(l.pi_steps) / lane_cfg_.pi.codes();
    }

private:
    struct LaneAccum {
        double cos_sum = 0.0, sin_sum = 0.0;
        std::uint64_t bits = 0, errors = 0;
        double phase_start = 0.0;

        double circular_mean() const {
            if (cos_sum == 0.0 && sin_sum == 0.0)
                return 0.0;
            double p = std::atan2(sin_sum, cos_sum) / 6.28318530717958647692528676656;
            if (p < 0.0)
                p += 1.0;
            return p;
        }
    };

    void batch_boundary() {
        // Each lane contributes its deserialized word's majority phase-error
        // decision. Using the sign (not the raw pattern counts) keeps the
        // integral path unbiased while the eye slips during acquisition.
        double votes = 0.0;
        for (auto& l : lanes_) {
            const double v = l->take_batch_votes();
            votes += (v > 0.0) - (v < 0.0);
        }
        fdiv_.frac_ctrl = integral_.accumulate(votes, cfg_.fdiv_nominal_frac,
                                               integral_cfg_);
        accum_trace_.push_back(integral_.freq_accum);

        const FdivEdge edge = fdiv_step(fdiv_, fdiv_cfg_);
        carry_sum_ += edge.carry;
        dev_ui_ = (edge.time - static_cast<double>(fdiv_.edges) * t_out_req_) /
                  t_ui_data_;
        for (auto& ilcm : ilcms_)
            ilcm_step(ilcm, dev_ui_);

        if (fdiv_telemetry_ && cfg_.run_telemetry_every > 0 &&
            fdiv_.edges % cfg_.run_telemetry_every == 0)
            *fdiv_telemetry_ << fdiv_.edges << ',' << fdiv_.frac_ctrl << ',' << fdiv_.dcw
                             << ',' << fdiv_.k_dcdl << ','
                             << static_cast<double>(carry_sum_) /
                                    static_cast<double>(fdiv_.edges)
                             << '\n';

        if (cfg_.run_spectrum == "fdiv") {
            theta_.push_back(6.28318530717958647692528676656 *
                             (edge.time - static_cast<double>(fdiv_.edges) * t_out_req_) /
                             t_out_req_);
        } else if (cfg_.run_spectrum == "clock") {
            const Lane& l0 = *lanes_[0];
            theta_.push_back(6.28318530717958647692528676656 *
                             (ilcms_[0].osc_phase + pi_phase(l0.pi_code, lane_cfg_.pi)));
        }
    }

    void step_one_ui(bool measuring) {
        for (std::size_t i = 0; i < lanes_.size(); ++i) {
            Lane& l = *lanes_[i];
            const auto res = l.step(n_, ilcms_[i].osc_phase);
            if (lane_telemetry_ && cfg_.run_telemetry_every > 0 &&
                n_ % cfg_.run_telemetry_every == 0)
                *lane_telemetry_ << n_ << ',' << i << ',' << l.pi_code << ','
                                 << l.dlev_code << ',' << l.pdlev_code << ','
                                 << l.eca.k_ratio << ',' << l.up_count << ','
                                 << l.dn_count << '\n';
            if (measuring) {
                LaneAccum& m = meas_[i];
                const double ang =
                    6.28318530717958647692528676656 * (res.phase - std::floor(res.phase));
                m.cos_sum += std::cos(ang);
                m.sin_sum += std::sin(ang);
                ++m.bits;
                if (res.decided != res.tx_bit)
                    ++m.errors;
                if (i == 0 && eye_ && cfg_.run_eye_decimate > 0 &&
                    n_ % cfg_.run_eye_decimate == 0) {
                    for (int pb = 0; pb < eye_->phase_bins; ++pb) {
                        const double p = (pb + 0.5) / eye_->phase_bins;
                        eye_->add(p, l.probe(n_, p),
                                  l.tx_bit(n_ + std::lround(p)));
                    }
                    eye_->lock_phase_bin = eye_->phase_bin(res.phase);
                }
            }
        }
        if (measuring)
            ++measure_ui_;
        ++n_;
        if (++ui_in_batch_ == kBatchUi)
            ui_in_batch_ = 0;
    }

    long settle_batch() const {
        if (accum_trace_.size() < 16)
            return 0;
        std::vector<double> tail(accum_trace_.end() -
                                     static_cast<long>(accum_trace_.size() / 10 + 1),
                                 accum_trace_.end());
        std::nth_element(tail.begin(), tail.begin() + static_cast<long>(tail.size() / 2),
                         tail.end());
        const double final_v = tail[tail.size() / 2];
        // the floor keeps the steady-state ki dither inside the band when the
        // converged value itself is near zero
        const double tol = 0.1 * std::max(std::abs(final_v), 50.0 * integral_cfg_.ki);
        for (std::size_t b = 0; b < accum_trace_.size(); ++b) {
            if (std::abs(accum_trace_[b] - final_v) <= tol) {
                // require it to stay inside from here on (no overshoot re-exit)
                bool stays = true;
                for (std::size_t j = b; j < accum_trace_.size(); ++j)
                    if (std::abs(accum_trace_[j] - final_v) > 2.0 * tol) {
                        stays = false;
                        break;
                    }
                if (stays)
                    return static_cast<long>(b);
            }
        }
        return static_cast<long>(accum_trace_.size());
    }

    ScenarioConfig cfg_;
    SingleBitResponse sbr_;
    AfeConfig afe_;
    LaneConfig lane_cfg_;
    FdivConfig fdiv_cfg_;
    IntegralConfig integral_cfg_;
    FdivState fdiv_{};
    IntegralPathState integral_{};
    std::vector<std::unique_ptr<Lane>> lanes_;
    std::vector<IlcmState> ilcms_;
    std::vector<LaneAccum> meas_;
    std::vector<double> theta_;
    std::vector<double> accum_trace_;
    std::optional<EyeDiagram> eye_;
    double t_ui_data_ = 31.25e-12;
    double t_out_req_ = 1e-9;
    double dev_ui_ = 0.0;
    std::int64_t n_ = 0;
    int ui_in_batch_ = 0;
    long measure_ui_ = 0;
    long ratio_edges_start_ = 0;
    double ratio_time_start_ = 0.0;
    long carry_sum_ = 0;
    std::ostream* lane_telemetry_ = nullptr;
    std::ostream* fdiv_telemetry_ = nullptr;
};

inline RunReport run_scenario(const ScenarioConfig& cfg) {
    SimEngine engine(cfg);
    return engine.run();
}

} // namespace baudrx
