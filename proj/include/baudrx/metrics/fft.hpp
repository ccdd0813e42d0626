#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace baudrx {

// In-place iterative radix-2 FFT; n must be a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -6.28318530717958647692528676656 / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline double hann_window(std::size_t i, std::size_t n) {
    return 0.5 * (1.0 - std::cos(6.28318530717958647692528676656 *
                                 static_cast<double>(i) / static_cast<double>(n)));
}

} // namespace baudrx
