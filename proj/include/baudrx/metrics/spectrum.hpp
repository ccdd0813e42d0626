#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "baudrx/metrics/fft.hpp"

namespace baudrx {

// Power spectrum of e^{j theta[n]} relative to the carrier, for spur analysis
// of a recovered-clock phase(-error) sequence. Readings follow the
// spectrum-analyzer convention: each sideband of a pair is reported
// individually relative to the carrier.
struct PhaseSpectrum {
    struct Cluster {
        double offset_hz;  // |offset| from the carrier
        double power_dbc;  // cluster-integrated power vs carrier
    };

    std::vector<double> freqs;     // one-sided offset axis, Hz
    std::vector<double> power_dbc; // per-offset-bin max of the two sidebands
    std::vector<Cluster> clusters; // detected spurs, strongest first
    double sample_rate = 0.0;
    int carrier_bin = 0;
    double spur_peak_dbc = -400.0;
    double spur_peak_hz = 0.0;
    double integrated_spur_dbc = -400.0; // all clusters, both sidebands
    double integration_bw_hz = 0.0;      // spur search span (stream Nyquist)
};

namespace detail {
inline std::size_t wrap_bin(long b, long n) {
    b %= n;
    if (b < 0)
        b += n;
    return static_cast<std::size_t>(b);
}
} // namespace detail

// theta in radians; length must be >= 2^14 (truncated down to a power of two).
// Spurs are +/-cluster_halfwidth-bin clusters around local maxima at least
// threshold_db above the median floor, outside the carrier guard.
inline PhaseSpectrum spectrum(std::span<const double> theta, double sample_rate,
                              int cluster_halfwidth = 2, double threshold_db = 10.0) {
    if (theta.size() < (1u << 14))
        throw std::invalid_argument("spectrum: need at least 2^14 samples");
    std::size_t n = 1;
    while (n * 2 <= theta.size())
        n *= 2;
    std::vector<std::complex<double>> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = std::polar(hann_window(i, n), theta[i]);
    fft_radix2(x);

    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = std::norm(x[i]);

    PhaseSpectrum out;
    out.sample_rate = sample_rate;
    const long nn = static_cast<long>(n);
    // the carrier lands wherever the residual mean frequency put it
    out.carrier_bin =
        static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    const int hw = cluster_halfwidth;
    double carrier_power = 0.0;
    for (long d = -hw; d <= hw; ++d)
        carrier_power += p[detail::wrap_bin(out.carrier_bin + d, nn)];
    if (carrier_power <= 0.0)
        throw std::runtime_error("spectrum: empty carrier");

    const double df = sample_rate / static_cast<double>(n);
    const std::size_t half = n / 2;
    out.freqs.resize(half + 1);
    out.power_dbc.resize(half + 1);
    for (std::size_t d = 0; d <= half; ++d) {
        out.freqs[d] = static_cast<double>(d) * df;
        const double up = p[detail::wrap_bin(out.carrier_bin + static_cast<long>(d), nn)];
        const double dn = p[detail::wrap_bin(out.carrier_bin - static_cast<long>(d), nn)];
        out.power_dbc[d] =
            10.0 * std::log10(std::max(std::max(up, dn), 1e-300) / carrier_power);
    }

    // spur clusters on the full two-sided spectrum, relative to the carrier bin
    const int guard = 2 * hw + 1;
    std::vector<double> sorted;
    sorted.reserve(n);
    for (long i = 0; i < nn; ++i) {
        long d = std::abs(i - out.carrier_bin);
        d = std::min(d, nn - d);
        if (d > guard)
            sorted.push_back(p[static_cast<std::size_t>(i)]);
    }
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2),
                     sorted.end());
    const double floor_p = std::max(sorted[sorted.size() / 2], 1e-300);
    const double thresh = floor_p * std::pow(10.0, threshold_db / 10.0);

    double spur_total = 0.0;
    for (long i = 0; i < nn; ++i) {
        long d = std::abs(i - out.carrier_bin);
        d = std::min(d, nn - d);
        if (d <= guard)
            continue;
        const double v = p[static_cast<std::size_t>(i)];
        if (v < thresh)
            continue;
        // local maximum over the cluster width
        bool is_max = true;
        for (long j = -hw; j <= hw && is_max; ++j)
            if (j != 0 && p[detail::wrap_bin(i + j, nn)] > v)
                is_max = false;
        if (!is_max)
            continue;
        double cluster = 0.0;
        for (long j = -hw; j <= hw; ++j)
            cluster += p[detail::wrap_bin(i + j, nn)];
        spur_total += cluster;
        const double dbc = 10.0 * std::log10(cluster / carrier_power);
        out.clusters.push_back({static_cast<double>(d) * df, dbc});
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const auto& a, const auto& b) { return a.power_dbc > b.power_dbc; });
    if (!out.clusters.empty()) {
        out.spur_peak_dbc = out.clusters.front().power_dbc;
        out.spur_peak_hz = out.clusters.front().offset_hz;
    }
    if (spur_total > 0.0)
        out.integrated_spur_dbc = 10.0 * std::log10(spur_total / carrier_power);
    out.integration_bw_hz = out.freqs.back();
    return out;
}

// Strongest detected cluster within +/-tol_hz of a target offset; falls back to
// the one-sided bin view when no cluster was flagged there.
inline double spur_power_near(const PhaseSpectrum& s, double freq_hz, double tol_hz = 0.0) {
    if (s.freqs.size() < 2)
        throw std::invalid_argument("spur_power_near: empty spectrum");
    const double df = s.freqs[1] - s.freqs[0];
    if (tol_hz <= 0.0)
        tol_hz = 3.0 * df;
    double best = -400.0;
    for (const auto& c : s.clusters)
        if (std::abs(c.offset_hz - freq_hz) <= tol_hz)
            best = std::max(best, c.power_dbc);
    if (best > -400.0)
        return best;
    const long bin = std::lround(freq_hz / df);
    for (long d = -3; d <= 3; ++d) {
        const long i = bin + d;
        if (i >= 1 && i < static_cast<long>(s.power_dbc.size()))
            best = std::max(best, s.power_dbc[static_cast<std::size_t>(i)]);
    }
    return best;
}

// Median of the one-sided dBc bins in a band, as a noise-floor estimate.
inline double floor_power_in_band(const PhaseSpectrum& s, double f_lo, double f_hi) {
    std::vector<double> v;
    for (std::size_t i = 1; i < s.freqs.size(); ++i)
        if (s.freqs[i] >= f_lo && s.freqs[i] <= f_hi)
            v.push_back(s.power_dbc[i]);
    if (v.empty())
        throw std::invalid_argument("floor_power_in_band: empty band");
    std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
    return v[v.size() / 2];
}

} // namespace baudrx
