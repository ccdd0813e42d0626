#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "baudrx/metrics/bathtub.hpp"
#include "baudrx/metrics/jtol.hpp"
#include "baudrx/metrics/spectrum.hpp"
#include "baudrx/metrics/vem.hpp"
#include "baudrx/sim/run.hpp"

namespace baudrx {

// BER vs sampling offset with the CDR frozen: lock normally, open the loop,
// then force the phase across [-span, +span] around the lock point. The error
// reference keeps the lock-point bit alignment, so the curve rises to ~0.5 at
// the eye edges.
inline BathtubCurve bathtub_scan(const ScenarioConfig& cfg, double span_ui = 0.45,
                                 int points = 31, long ui_per_point = 0) {
    if (points < 2)
        throw std::invalid_argument("bathtub_scan: need at least 2 points");
    SimEngine eng(cfg);
    eng.warmup();
    eng.measure_segment(16 * 1024); // settle the lock estimate
    eng.freeze(true, true);
    if (ui_per_point <= 0)
        ui_per_point = std::max<long>((cfg.run_n_ui - cfg.run_warmup_ui) / points, 1024);

    BathtubCurve curve;
    for (int i = 0; i < points; ++i) {
        const double off = -span_ui + 2.0 * span_ui * i / (points - 1);
        eng.set_forced_offset(off);
        const auto s = eng.measure_segment(ui_per_point);
        BathtubPoint p{};
        p.phase_ui = off;
        p.bits = s.bits;
        p.errors = s.errors;
        p.ber = s.ber();
        p.ber_upper = ber_upper_bound(s.errors, s.bits);
        curve.points.push_back(p);
    }
    return curve;
}

// Max SJ amplitude sustaining BER < target, binary-searched per frequency with
// monotone bracketing. Unlockable frequencies are reported unconverged.
inline JtolCurve jtol_sweep(const ScenarioConfig& base, const std::vector<double>& freqs,
                            double target_ber, long ui_budget) {
    JtolCurve curve;
    const long measure_ui = std::max<long>(ui_budget - base.run_warmup_ui, 1024);
    const double err_budget = target_ber * static_cast<double>(measure_ui);

    auto passes = [&](double freq, double amp) {
        ScenarioConfig cfg = base;
        cfg.jitter_sj_frequency_hz = freq;
        cfg.jitter_sj_amplitude_ui = amp;
        cfg.run_n_ui = ui_budget;
        SimEngine eng(cfg);
        eng.warmup();
        const auto s = eng.measure_segment(measure_ui);
        return static_cast<double>(s.errors) < err_budget;
    };

    for (double f : freqs) {
        const double amp_min = 0.02;
        if (!passes(f, amp_min)) {
            JtolPoint p{f, 0.0, false};
            curve.points.push_back(p);
            continue;
        }
        double lo = amp_min, hi = amp_min;
        while (hi < 16.0 && passes(f, hi * 2.0))
            hi *= 2.0;
        if (hi >= 16.0) {
            curve.points.push_back({f, hi, true});
            continue;
        }
        hi *= 2.0; // first failing amplitude
        lo = hi / 2.0;
        for (int it = 0; it < 8; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (passes(f, mid))
                lo = mid;
            else
                hi = mid;
        }
        curve.points.push_back({f, lo, true});
    }
    return curve;
}

// Long run with the recovered-clock (or FDIV) phase stream captured, reduced to
// a spur spectrum.
inline PhaseSpectrum spectrum_experiment(const ScenarioConfig& cfg) {
    ScenarioConfig c = cfg;
    if (c.run_spectrum.empty())
        c.run_spectrum = "clock";
    SimEngine eng(c);
    eng.run();
    return spectrum(eng.spectrum_capture(), eng.spectrum_sample_rate());
}

// Independent runs over a scalar config path; the path is validated before any
// run. Each point gets a distinct seed offset.
inline std::vector<RunReport> sweep(const ScenarioConfig& base, const std::string& path,
                                    const std::vector<std::string>& values) {
    if (values.empty())
        throw ConfigError("sweep: empty value list");
    {
        ScenarioConfig probe = base;
        for (const auto& v : values)
            config_set(probe, path, v); // throws on bad path/value before any run
    }
    std::vector<RunReport> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioConfig cfg = base;
        config_set(cfg, path, values[i]);
        cfg.run_seed = base.run_seed + i;
        cfg.validate();
        out.push_back(run_scenario(cfg));
    }
    return out;
}

inline void write_sweep_csv(const std::string& path,
                            const std::vector<std::string>& values,
                            const std::vector<RunReport>& reports, std::ostream& out) {
    out << "param,value,lock_phase_ui,ber,k_ratio,pdlev_code,mean_div_ratio,residual_ppm,"
           "loss_of_lock\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const auto& l = r.lane.at(0);
        out << path << ',' << values[i] << ',' << l.lock_phase_ui << ',' << l.ber << ','
            << l.k_ratio << ',' << l.pdlev_code << ',' << r.mean_div_ratio << ','
            << l.residual_ppm << ',' << (r.loss_of_lock ? 1 : 0) << '\n';
    }
}

} // namespace baudrx
