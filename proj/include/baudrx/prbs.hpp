#pragma once

#include <cstdint>
#include <stdexcept>

namespace baudrx {

enum class PrbsPoly { Prbs7, Prbs31 };

// Fibonacci LFSR bit source mapped to {-1,+1}.
//   PRBS7:  x^7 + x^6 + 1   (period 127)
//   PRBS31: x^31 + x^28 + 1 (period 2^31 - 1)
class PrbsState {
public:
    explicit PrbsState(PrbsPoly poly = PrbsPoly::Prbs7, std::uint32_t seed = 0)
        : poly_(poly) {
        const std::uint32_t mask = (poly == PrbsPoly::Prbs7) ? 0x7fu : 0x7fffffffu;
        reg_ = (seed == 0) ? mask : (seed & mask);
        if (reg_ == 0)
            throw std::invalid_argument("PrbsState: all-zero seed");
    }

    PrbsPoly poly() const { return poly_; }
    std::uint32_t reg() const { return reg_; }

    // Advance one step, return the new output bit as -1/+1.
    int next() {
        std::uint32_t fb;
        if (poly_ == PrbsPoly::Prbs7) {
            fb = ((reg_ >> 6) ^ (reg_ >> 5)) & 1u;
            reg_ = ((reg_ << 1) | fb) & 0x7fu;
        } else {
            fb = ((reg_ >> 30) ^ (reg_ >> 27)) & 1u;
            reg_ = ((reg_ << 1) | fb) & 0x7fffffffu;
        }
        return fb ? +1 : -1;
    }

private:
    PrbsPoly poly_;
    std::uint32_t reg_;
};

inline int prbs_next(PrbsState& state) { return state.next(); }

} // namespace baudrx
