#pragma once

#include <cmath>
#include <stdexcept>

#include "baudrx/sbr.hpp"

namespace baudrx {

// Behavioral CTLE: one zero, two poles, applied to the oversampled SBR via a
// bilinear-discretized biquad. dc gain is exact at z=1.
//
//   H(s) = dc_gain * (1 + s/wz) / ((1 + s/wp1)(1 + s/wp2))
//
// Setting zero_hz == pole1_hz cancels that pair exactly in the discretized
// coefficients.
inline SingleBitResponse ctle_shape(const SingleBitResponse& sbr, double zero_hz,
                                    double pole1_hz, double pole2_hz, double dc_gain,
                                    double ui_seconds) {
    if (!(zero_hz > 0.0) || pole1_hz < zero_hz || pole2_hz < zero_hz)
        throw std::invalid_argument("ctle_shape: require pole1,pole2 >= zero > 0");
    if (!(dc_gain > 0.0))
        throw std::invalid_argument("ctle_shape: dc_gain must be positive");
    if (!(ui_seconds > 0.0))
        throw std::invalid_argument("ctle_shape: ui_seconds must be positive");

    const double ts = ui_seconds / sbr.oversampling;
    const double two_pi = 6.28318530717958647692528676656;
    const double c = 2.0 / (two_pi * zero_hz * ts);
    const double a1p = 2.0 / (two_pi * pole1_hz * ts);
    const double a2p = 2.0 / (two_pi * pole2_hz * ts);

    // numerator (1+c) + 2 z^-1 ... from (1 + s/wz)(1 + z^-1)
    const double b0 = 1.0 + c;
    const double b1 = 2.0;
    const double b2 = 1.0 - c;
    const double d0 = (1.0 + a1p) * (1.0 + a2p);
    const double d1 = (1.0 + a1p) * (1.0 - a2p) + (1.0 - a1p) * (1.0 + a2p);
    const double d2 = (1.0 - a1p) * (1.0 - a2p);

    SingleBitResponse out;
    out.oversampling = sbr.oversampling;
    // extend the tail so energy delayed by the poles is not truncated
    const std::size_t n = sbr.samples.size() + static_cast<std::size_t>(2 * sbr.oversampling);
    out.samples.assign(n, 0.0);
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i < sbr.samples.size() ? sbr.samples[i] : 0.0;
        const double y = (dc_gain * (b0 * x + b1 * x1 + b2 * x2) - d1 * y1 - d2 * y2) / d0;
        x2 = x1;
        x1 = x;
        y2 = y1;
        y1 = y;
        out.samples[i] = y;
    }
    const auto peak = std::max_element(out.samples.begin(), out.samples.end());
    out.cursor_index = static_cast<int>(peak - out.samples.begin());
    out.validate();
    return out;
}

} // namespace baudrx
