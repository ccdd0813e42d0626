#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "baudrx/afe.hpp"
#include "baudrx/ctle.hpp"
#include "baudrx/eca.hpp"
#include "baudrx/fdiv.hpp"
#include "baudrx/integral.hpp"
#include "baudrx/lane.hpp"
#include "baudrx/sbr.hpp"

namespace baudrx {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full experiment description. Scalar fields are addressable as
// "section.key" strings (config files, sweep parameter paths, overrides).
struct ScenarioConfig {
    // channel
    std::string channel_source = "cursors"; // cursors | lowpass | csv
    std::vector<double> channel_cursors{0.1, 1.0, 0.05};
    int channel_precursors = 1;
    int channel_oversampling = 32;
    double channel_loss_db = 15.0;
    std::string channel_csv_path;
    // optional CTLE reshaping of the channel SBR
    bool ctle_enabled = false;
    double ctle_zero_hz = 2e9;
    double ctle_pole1_hz = 8e9;
    double ctle_pole2_hz = 32e9;
    double ctle_dc_gain = 1.0;

    // clock
    double clock_ui_ps = 31.25;
    double clock_ppm_offset = 0.0;

    // jitter
    double jitter_rj_sigma_ui = 0.0;
    double jitter_sj_amplitude_ui = 0.0;
    double jitter_sj_frequency_hz = 0.0;

    // afe
    double afe_dfe_tap = 0.0;
    double afe_noise_sigma = 0.0; // all three samplers
    // per-sampler overrides; negative means "inherit afe_noise_sigma"
    double afe_noise_sigma_d = -1.0, afe_noise_sigma_epd = -1.0,
           afe_noise_sigma_eem = -1.0;
    double afe_offset_d = 0.0, afe_offset_epd = 0.0, afe_offset_eem = 0.0;
    double afe_dac_fullscale = 1.26;

    // lane
    int lane_pi_bits = 8;
    std::string lane_pi_mode = "ideal"; // ideal | diamond
    int lane_prop_threshold = 16;
    int lane_dlev_every = 16;
    int lane_pdlev_every = 4;
    int lane_bdlev_every = 4;
    int lane_dlev_init = 0;
    int lane_pdlev_init = 0;
    std::string lane_level_mode = "pdlev"; // pdlev | bdlev
    bool lane_dfe_adapt = false;
    int lane_dfe_adapt_every = 64;
    std::string lane_prbs = "prbs7"; // prbs7 | prbs31

    // eca
    bool eca_enabled = false;
    double eca_delta_ui = 1.0 / 32.0;
    double eca_k_init = 1.0;
    int eca_period_ui = 8192;
    double eca_k_step = 1.0 / 16.0;
    double eca_k_min = 0.125;
    double eca_k_max = 8.0;
    double eca_deadband = 0.0;

    // fdiv
    int fdiv_div_int = 16;
    double fdiv_t_lc_ps = 62.5;
    double fdiv_gain_error = 0.0;    // k_dcdl_init = k_true * (1 + gain_error)
    double fdiv_inl_peak_lsb = 0.73;
    double fdiv_mu_rel = 0.0;        // calibration step relative to k_true, 0 = off
    bool fdiv_tracking_on = true;    // integral path drives frac_ctrl
    double fdiv_nominal_frac = 0.0;

    // integral path
    double integral_ki = 1e-5;
    double integral_clamp = 0.08;

    // ilcm
    double ilcm_beta = 1.0;
    double ilcm_trim_gain = 0.0;

    // run
    long run_n_ui = 1000000;
    long run_warmup_ui = 200000;
    std::uint64_t run_seed = 1;
    int run_lanes = 1;
    int run_eye_decimate = 0;      // accumulate eye every Nth UI (0 = off)
    std::string run_spectrum = ""; // "" | fdiv | clock
    long run_telemetry_every = 0;  // decimation for the per-lane telemetry CSV

    void validate() const {
        if (run_lanes < 1 || run_lanes > 4)
            throw ConfigError("run.lanes must be 1..4");
        if (run_n_ui <= run_warmup_ui)
            throw ConfigError("run.n_ui must exceed run.warmup_ui");
        if (std::abs(clock_ppm_offset) > 10000.0)
            throw ConfigError("clock.ppm_offset outside +/-10000");
        if (lane_pi_mode != "ideal" && lane_pi_mode != "diamond")
            throw ConfigError("lane.pi_mode must be ideal or diamond");
        if (lane_level_mode != "pdlev" && lane_level_mode != "bdlev")
            throw ConfigError("lane.level_mode must be pdlev or bdlev");
        if (channel_source != "cursors" && channel_source != "lowpass" &&
            channel_source != "csv")
            throw ConfigError("channel.source must be cursors, lowpass or csv");
        if (run_spectrum != "" && run_spectrum != "fdiv" && run_spectrum != "clock")
            throw ConfigError("run.spectrum must be empty, fdiv or clock");
    }

    // --- derived objects -----------------------------------------------------

    SingleBitResponse make_sbr() const {
        SingleBitResponse sbr;
        if (channel_source == "cursors")
            sbr = sbr_from_cursors(channel_cursors, channel_precursors,
                                   channel_oversampling);
        else if (channel_source == "lowpass")
            sbr = sbr_lowpass_template(channel_loss_db, channel_oversampling);
        else
            sbr = load_sbr_csv(channel_csv_path);
        if (ctle_enabled)
            sbr = ctle_shape(sbr, ctle_zero_hz, ctle_pole1_hz, ctle_pole2_hz,
                             ctle_dc_gain, clock_ui_ps * 1e-12);
        return sbr;
    }

    AfeConfig make_afe() const {
        AfeConfig a;
        a.dfe_tap = afe_dfe_tap;
        a.set_noise(afe_noise_sigma);
        if (afe_noise_sigma_d >= 0.0)
            a.sampler_noise[0] = afe_noise_sigma_d;
        if (afe_noise_sigma_epd >= 0.0)
            a.sampler_noise[1] = afe_noise_sigma_epd;
        if (afe_noise_sigma_eem >= 0.0)
            a.sampler_noise[2] = afe_noise_sigma_eem;
        a.sampler_offset = {afe_offset_d, afe_offset_epd, afe_offset_eem};
        a.dac_fullscale = afe_dac_fullscale;
        a.validate();
        return a;
    }

    LaneConfig make_lane() const {
        LaneConfig l;
        l.pi.bits = lane_pi_bits;
        l.pi.mode = lane_pi_mode == "diamond" ? PiMode::Diamond : PiMode::Ideal;
        l.prop_threshold = lane_prop_threshold;
        l.dlev_every = lane_dlev_every;
        l.pdlev_every = lane_pdlev_every;
        l.bdlev_every = lane_bdlev_every;
        l.dlev_init = lane_dlev_init;
        l.pdlev_init = lane_pdlev_init;
        l.level_mode = lane_level_mode == "bdlev" ? LevelMode::Bdlev : LevelMode::Pdlev;
        l.dfe_adapt = lane_dfe_adapt;
        l.dfe_adapt_every = lane_dfe_adapt_every;
        l.eca.enabled = eca_enabled;
        l.eca.delta_ui = eca_delta_ui;
        l.eca.k_init = eca_k_init;
        l.eca.dither_period = eca_period_ui;
        l.eca.k_step = eca_k_step;
        l.eca.k_min = eca_k_min;
        l.eca.k_max = eca_k_max;
        l.eca.deadband = eca_deadband;
        l.eca.validate();
        l.jitter.rj_sigma = jitter_rj_sigma_ui;
        l.jitter.sj_amplitude = jitter_sj_amplitude_ui;
        l.jitter.sj_frequency = jitter_sj_frequency_hz;
        l.jitter.validate();
        l.prbs = lane_prbs == "prbs31" ? PrbsPoly::Prbs31 : PrbsPoly::Prbs7;
        return l;
    }

    FdivConfig make_fdiv() const {
        FdivConfig f;
        f.div_int = fdiv_div_int;
        f.t_lc = fdiv_t_lc_ps * 1e-12;
        f.plant.k_true = f.t_lc / 512.0;
        f.plant.inl_peak_lsb = fdiv_inl_peak_lsb;
        f.k_dcdl_init = f.plant.k_true * (1.0 + fdiv_gain_error);
        f.mu = fdiv_mu_rel * f.plant.k_true;
        f.validate();
        return f;
    }

    IntegralConfig make_integral() const {
        IntegralConfig ic;
        ic.enabled = fdiv_tracking_on;
        ic.ki = integral_ki;
        ic.clamp = integral_clamp;
        ic.validate();
        return ic;
    }

    // Division ratio the channel's frequency offset requires of the FDIV.
    double required_ratio() const {
        return fdiv_div_int * (1.0 + clock_ppm_offset * 1e-6);
    }
};

namespace detail {

struct FieldRef {
    enum Kind { Double, Int, Long, U64, Bool, String } kind;
    void* ptr;
};

inline std::map<std::string, FieldRef> field_registry(ScenarioConfig& c) {
    using F = FieldRef;
    return {
        {"channel.source", {F::String, &c.channel_source}},
        {"channel.precursors", {F::Int, &c.channel_precursors}},
        {"channel.oversampling", {F::Int, &c.channel_oversampling}},
        {"channel.loss_db", {F::Double, &c.channel_loss_db}},
        {"channel.csv_path", {F::String, &c.channel_csv_path}},
        {"ctle.enabled", {F::Bool, &c.ctle_enabled}},
        {"ctle.zero_hz", {F::Double, &c.ctle_zero_hz}},
        {"ctle.pole1_hz", {F::Double, &c.ctle_pole1_hz}},
        {"ctle.pole2_hz", {F::Double, &c.ctle_pole2_hz}},
        {"ctle.dc_gain", {F::Double, &c.ctle_dc_gain}},
        {"clock.ui_ps", {F::Double, &c.clock_ui_ps}},
        {"clock.ppm_offset", {F::Double, &c.clock_ppm_offset}},
        {"jitter.rj_sigma_ui", {F::Double, &c.jitter_rj_sigma_ui}},
        {"jitter.sj_amplitude_ui", {F::Double, &c.jitter_sj_amplitude_ui}},
        {"jitter.sj_frequency_hz", {F::Double, &c.jitter_sj_frequency_hz}},
        {"afe.dfe_tap", {F::Double, &c.afe_dfe_tap}},
        {"afe.noise_sigma", {F::Double, &c.afe_noise_sigma}},
        {"afe.noise_sigma_d", {F::Double, &c.afe_noise_sigma_d}},
        {"afe.noise_sigma_epd", {F::Double, &c.afe_noise_sigma_epd}},
        {"afe.noise_sigma_eem", {F::Double, &c.afe_noise_sigma_eem}},
        {"afe.offset_d", {F::Double, &c.afe_offset_d}},
        {"afe.offset_epd", {F::Double, &c.afe_offset_epd}},
        {"afe.offset_eem", {F::Double, &c.afe_offset_eem}},
        {"afe.dac_fullscale", {F::Double, &c.afe_dac_fullscale}},
        {"lane.pi_bits", {F::Int, &c.lane_pi_bits}},
        {"lane.pi_mode", {F::String, &c.lane_pi_mode}},
        {"lane.prop_threshold", {F::Int, &c.lane_prop_threshold}},
        {"lane.dlev_every", {F::Int, &c.lane_dlev_every}},
        {"lane.pdlev_every", {F::Int, &c.lane_pdlev_every}},
        {"lane.bdlev_every", {F::Int, &c.lane_bdlev_every}},
        {"lane.dlev_init", {F::Int, &c.lane_dlev_init}},
        {"lane.pdlev_init", {F::Int, &c.lane_pdlev_init}},
        {"lane.level_mode", {F::String, &c.lane_level_mode}},
        {"lane.dfe_adapt", {F::Bool, &c.lane_dfe_adapt}},
        {"lane.dfe_adapt_every", {F::Int, &c.lane_dfe_adapt_every}},
        {"lane.prbs", {F::String, &c.lane_prbs}},
        {"eca.enabled", {F::Bool, &c.eca_enabled}},
        {"eca.delta_ui", {F::Double, &c.eca_delta_ui}},
        {"eca.k_init", {F::Double, &c.eca_k_init}},
        {"eca.period_ui", {F::Int, &c.eca_period_ui}},
        {"eca.k_step", {F::Double, &c.eca_k_step}},
        {"eca.k_min", {F::Double, &c.eca_k_min}},
        {"eca.k_max", {F::Double, &c.eca_k_max}},
        {"eca.deadband", {F::Double, &c.eca_deadband}},
        {"fdiv.div_int", {F::Int, &c.fdiv_div_int}},
        {"fdiv.t_lc_ps", {F::Double, &c.fdiv_t_lc_ps}},
        {"fdiv.gain_error", {F::Double, &c.fdiv_gain_error}},
        {"fdiv.inl_peak_lsb", {F::Double, &c.fdiv_inl_peak_lsb}},
        {"fdiv.mu_rel", {F::Double, &c.fdiv_mu_rel}},
        {"fdiv.tracking_on", {F::Bool, &c.fdiv_tracking_on}},
        {"fdiv.nominal_frac", {F::Double, &c.fdiv_nominal_frac}},
        {"integral.ki", {F::Double, &c.integral_ki}},
        {"integral.clamp", {F::Double, &c.integral_clamp}},
        {"ilcm.beta", {F::Double, &c.ilcm_beta}},
        {"ilcm.trim_gain", {F::Double, &c.ilcm_trim_gain}},
        {"run.n_ui", {F::Long, &c.run_n_ui}},
        {"run.warmup_ui", {F::Long, &c.run_warmup_ui}},
        {"run.seed", {F::U64, &c.run_seed}},
        {"run.lanes", {F::Int, &c.run_lanes}},
        {"run.eye_decimate", {F::Int, &c.run_eye_decimate}},
        {"run.spectrum", {F::String, &c.run_spectrum}},
        {"run.telemetry_every", {F::Long, &c.run_telemetry_every}},
    };
}

inline bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes")
        return true;
    if (v == "0" || v == "false" || v == "off" || v == "no")
        return false;
    throw ConfigError("bad boolean value: " + v);
}

} // namespace detail

inline void config_set(ScenarioConfig& c, const std::string& path,
                       const std::string& value) {
    if (path == "channel.cursors") {
        std::stringstream ss(value);
        std::vector<double> v;
        double x;
        while (ss >> x)
            v.push_back(x);
        if (v.empty())
            throw ConfigError("channel.cursors: empty list");
        c.channel_cursors = v;
        return;
    }
    auto reg = detail::field_registry(c);
    const auto it = reg.find(path);
    if (it == reg.end())
        throw ConfigError("unknown config key: " + path);
    try {
        using F = detail::FieldRef;
        switch (it->second.kind) {
        case F::Double: *static_cast<double*>(it->second.ptr) = std::stod(value); break;
        case F::Int: *static_cast<int*>(it->second.ptr) = std::stoi(value); break;
        case F::Long: *static_cast<long*>(it->second.ptr) = std::stol(value); break;
        case F::U64:
            *static_cast<std::uint64_t*>(it->second.ptr) = std::stoull(value);
            break;
        case F::Bool:
            *static_cast<bool*>(it->second.ptr) = detail::parse_bool(value);
            break;
        case F::String: *static_cast<std::string*>(it->second.ptr) = value; break;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("bad value for " + path + ": " + value);
    }
}

// Sections with "key = value" lines; '#' and ';' start comments.
inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig c;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos)
                return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside section");
        config_set(c, section + "." + key, value);
    }
    c.validate();
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot open config file: " + path);
    return parse_config(f);
}

// Canonical serialization: every addressable field in registry order, used for
// the config hash recorded in reports.
inline std::string config_canonical_text(const ScenarioConfig& cfg) {
    ScenarioConfig& c = const_cast<ScenarioConfig&>(cfg);
    auto reg = detail::field_registry(c);
    std::ostringstream out;
    out.precision(17);
    out << "channel.cursors =";
    for (double v : cfg.channel_cursors)
        out << ' ' << v;
    out << '\n';
    for (const auto& [key, ref] : reg) {
        out << key << " = ";
        using F = detail::FieldRef;
        switch (ref.kind) {
        case F::Double: out << *static_cast<double*>(ref.ptr); break;
        case F::Int: out << *static_cast<int*>(ref.ptr); break;
        case F::Long: out << *static_cast<long*>(ref.ptr); break;
        case F::U64: out << *static_cast<std::uint64_t*>(ref.ptr); break;
        case F::Bool: out << (*static_cast<bool*>(ref.ptr) ? 1 : 0); break;
        case F::String: out << *static_cast<std::string*>(ref.ptr); break;
        }
        out << '\n';
    }
    return out.str();
}

// FNV-1a over the canonical text.
inline std::uint64_t config_hash(const ScenarioConfig& cfg) {
    const std::string text = config_canonical_text(cfg);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace baudrx
