#pragma once

#include <cstdint>
#include <cmath>

namespace baudrx {

// splitmix64 step; also used standalone to derive per-stream seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic RNG with a pinned gaussian (Box-Muller), so that runs are
// reproducible byte-for-byte independent of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // uniform in [0,1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double sigma) { return sigma == 0.0 ? 0.0 : sigma * gaussian(); }

    // Derive an independent child stream (lane seeds, sweep points, ...).
    Rng fork(std::uint64_t salt) const {
        std::uint64_t s = state_ ^ (0x9e3779b97f4a7c15ull * (salt + 1));
        return Rng(splitmix64_next(s));
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace baudrx
