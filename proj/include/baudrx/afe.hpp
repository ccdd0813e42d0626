#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "baudrx/rng.hpp"
#include "baudrx/waveform.hpp"

namespace baudrx {

// Behavioral front end: 1-tap DFE summer plus three strong-arm-style samplers
// (data, phase-detect error, eye-monitor error) with 6-bit reference DACs.
// Each comparator carries its own input-referred offset and noise.
struct AfeConfig {
    double dfe_tap = 0.0;                          // volts per previous decided bit
    std::array<double, 3> sampler_noise{0, 0, 0};  // volts rms: data, e_pd, e_em
    std::array<double, 3> sampler_offset{0, 0, 0}; // data, e_pd, e_em
    double dac_fullscale = 1.26;                   // volts at code 63
    int dac_bits = 6;

    void set_noise(double sigma) { sampler_noise = {sigma, sigma, sigma}; }

    void validate() const {
        if (dac_bits != 6)
            throw std::invalid_argument("AfeConfig: dac_bits must be 6");
        for (double s : sampler_noise)
            if (s < 0.0)
                throw std::invalid_argument("AfeConfig: negative sampler noise");
    }
};

struct SamplerOutputs {
    int d;    // data decision
    int e_pd; // error vs Dlev*d, CLK instant
    int e_em; // error vs Pdlev*d, CLK_ECA instant
};

inline double dfe_apply(double v_in, int prev_bit, double tap) {
    return v_in - prev_bit * tap;
}

// Comparator: sign(v - vref + offset + noise); exact zero resolves to +1.
inline int sampler_decide(double v, double vref, const AfeConfig& cfg, int which,
                          Rng& rng) {
    const double z = v - vref + cfg.sampler_offset[static_cast<std::size_t>(which)] +
                     rng.gaussian(cfg.sampler_noise[static_cast<std::size_t>(which)]);
    return z < 0.0 ? -1 : +1;
}

inline double dac_voltage(int code, const AfeConfig& cfg) {
    if (code < 0 || code > 63)
        throw std::out_of_range("dac_voltage: code outside 0..63");
    return cfg.dac_fullscale * code / 63.0;
}

// One UI worth of sampling. The three samplers share the DFE-corrected input;
// the error samplers compare against vref * d (slicing relative to the decided
// symbol), and the eye monitor is clocked eca_extra_delay later.
inline SamplerOutputs sample_three(const SingleBitResponse& sbr, const BitHistory& bits,
                                   std::int64_t n, double clk_phase,
                                   double eca_extra_delay, int dlev_code, int pdlev_code,
                                   int prev_bit, const AfeConfig& cfg, Rng& rng) {
    const double v_pd = dfe_apply(waveform_value(sbr, bits, n, clk_phase), prev_bit,
                                  cfg.dfe_tap);
    const double v_em =
        eca_extra_delay == 0.0
            ? v_pd
            : dfe_apply(waveform_value(sbr, bits, n, clk_phase + eca_extra_delay),
                        prev_bit, cfg.dfe_tap);
    SamplerOutputs out{};
    out.d = sampler_decide(v_pd, 0.0, cfg, 0, rng);
    out.e_pd = sampler_decide(v_pd, out.d * dac_voltage(dlev_code, cfg), cfg, 1, rng);
    out.e_em = sampler_decide(v_em, out.d * dac_voltage(pdlev_code, cfg), cfg, 2, rng);
    return out;
}

// Span-window variant (fixed pattern experiments and tests).
inline SamplerOutputs sample_three(const SingleBitResponse& sbr, std::span<const int> bits,
                                   int center, double clk_phase, double eca_extra_delay,
                                   int dlev_code, int pdlev_code, int prev_bit,
                                   const AfeConfig& cfg, Rng& rng) {
    const double v_pd =
        dfe_apply(waveform_value(sbr, bits, center, clk_phase), prev_bit, cfg.dfe_tap);
    const double v_em =
        eca_extra_delay == 0.0
            ? v_pd
            : dfe_apply(waveform_value(sbr, bits, center, clk_phase + eca_extra_delay),
                        prev_bit, cfg.dfe_tap);
    SamplerOutputs out{};
    out.d = sampler_decide(v_pd, 0.0, cfg, 0, rng);
    out.e_pd = sampler_decide(v_pd, out.d * dac_voltage(dlev_code, cfg), cfg, 1, rng);
    out.e_em = sampler_decide(v_em, out.d * dac_voltage(pdlev_code, cfg), cfg, 2, rng);
    return out;
}

} // namespace baudrx
