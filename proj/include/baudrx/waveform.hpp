#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "baudrx/rng.hpp"
#include "baudrx/sbr.hpp"

namespace baudrx {

struct ClockDomain {
    double nominal_ui = 31.25e-12; // seconds (32 Gb/s)
    double ppm_offset = 0.0;       // TX vs RX reference, parts-per-million

    void validate() const {
        if (!(nominal_ui > 0.0))
            throw std::invalid_argument("ClockDomain: nominal_ui must be positive");
        if (std::abs(ppm_offset) > 10000.0)
            throw std::invalid_argument("ClockDomain: |ppm_offset| > 10000");
    }
};

struct JitterSpec {
    double rj_sigma = 0.0;     // UI rms
    double sj_amplitude = 0.0; // UI
    double sj_frequency = 0.0; // Hz

    void validate() const {
        if (rj_sigma < 0.0 || sj_amplitude < 0.0)
            throw std::invalid_argument("JitterSpec: negative jitter");
    }
    bool any() const { return rj_sigma > 0.0 || sj_amplitude > 0.0; }
};

// Sampling-instant offset (UI) for UI index n. Deterministic given the rng seed.
inline double jitter_offset(const JitterSpec& spec, std::uint64_t n, double ui_seconds,
                            Rng& rng) {
    double off = 0.0;
    if (spec.sj_amplitude > 0.0)
        off += spec.sj_amplitude *
               std::sin(6.28318530717958647692528676656 * spec.sj_frequency *
                        static_cast<double>(n) * ui_seconds);
    if (spec.rj_sigma > 0.0)
        off += spec.rj_sigma * rng.gaussian();
    return off;
}

// Receive waveform value for bit index `center` of the window at fractional
// phase offset `phase` (UI) from the cursor instant:
//
//   v = sum_k bits[center - k] * sbr( (k + phase) UI )
//
// The window must cover every cursor the SBR (plus interpolation) can reach.
inline double waveform_value(const SingleBitResponse& sbr, std::span<const int> bits,
                             int center, double phase) {
    const int klo = sbr.min_cursor() - 1 - static_cast<int>(std::floor(phase));
    const int khi = sbr.max_cursor() - static_cast<int>(std::floor(phase));
    if (center - khi < 0 || center - klo >= static_cast<int>(bits.size()))
        throw std::invalid_argument("waveform_value: bit window too short for SBR support");
    double v = 0.0;
    for (int k = klo; k <= khi; ++k)
        v += bits[static_cast<std::size_t>(center - k)] * sbr.value_at(k + phase);
    return v;
}

// Unbounded bit history with absolute indexing, backed by a ring buffer.
// Supports the lookahead/lookback the sampler needs under large SJ excursions.
class BitHistory {
public:
    explicit BitHistory(std::size_t capacity = 256) : buf_(round_up(capacity), 0) {}

    void push(int bit) {
        buf_[static_cast<std::size_t>(next_) & (buf_.size() - 1)] = bit;
        ++next_;
    }

    // absolute index of the next bit to be pushed
    std::int64_t next_index() const { return next_; }

    int at(std::int64_t n) const {
        if (n < 0 || n >= next_ || n + static_cast<std::int64_t>(buf_.size()) < next_)
            return -1; // outside history: idle line at the low level
        return buf_[static_cast<std::size_t>(n) & (buf_.size() - 1)];
    }

private:
    static std::size_t round_up(std::size_t c) {
        std::size_t n = 1;
        while (n < c)
            n <<= 1;
        return n;
    }
    std::vector<int> buf_;
    std::int64_t next_ = 0;
};

// Waveform value against a BitHistory at absolute bit index n.
inline double waveform_value(const SingleBitResponse& sbr, const BitHistory& bits,
                             std::int64_t n, double phase) {
    const int shift = static_cast<int>(std::floor(phase));
    const double frac = phase - shift;
    double v = 0.0;
    for (int k = sbr.min_cursor() - 1; k <= sbr.max_cursor(); ++k)
        v += bits.at(n - k + shift) * sbr.value_at(k + frac);
    return v;
}

} // namespace baudrx
