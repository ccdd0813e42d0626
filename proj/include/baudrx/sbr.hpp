#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace baudrx {

// Oversampled single-bit (pulse) response of the channel, possibly reshaped by
// the CTLE. Cursors h(k) are the values at UI-spaced offsets from the main
// cursor; h(0) is the main cursor, h(-1) the first precursor, h(1) the first
// postcursor.
struct SingleBitResponse {
    std::vector<double> samples; // volts
    int oversampling = 32;       // samples per UI, >= 8
    int cursor_index = 0;        // index of the h(0) peak

    void validate() const {
        if (oversampling < 8)
            throw std::invalid_argument("SingleBitResponse: oversampling < 8");
        if (cursor_index - oversampling < 0 ||
            cursor_index + oversampling >= static_cast<int>(samples.size()))
            throw std::invalid_argument("SingleBitResponse: cursor_index +/- one UI out of range");
        const double h0 = samples[static_cast<std::size_t>(cursor_index)];
        if (h0 <= 0.0)
            throw std::invalid_argument("SingleBitResponse: h(0) must be positive");
        for (int k = min_cursor(); k <= max_cursor(); ++k) {
            if (k != 0 && std::abs(h(k)) > h0)
                throw std::invalid_argument("SingleBitResponse: main cursor not dominant");
        }
    }

    // Most negative / positive integer cursor offsets representable.
    int min_cursor() const { return -(cursor_index / oversampling); }
    int max_cursor() const {
        return (static_cast<int>(samples.size()) - 1 - cursor_index) / oversampling;
    }

    double h(int k) const {
        const int idx = cursor_index + k * oversampling;
        if (idx < 0 || idx >= static_cast<int>(samples.size()))
            throw std::out_of_range("SingleBitResponse::h: cursor outside support");
        return samples[static_cast<std::size_t>(idx)];
    }

    // Response at a real UI offset from the main cursor; linear interpolation
    // between oversampled points, zero outside the stored support.
    double value_at(double ui_offset) const {
        const double pos = static_cast<double>(cursor_index) + ui_offset * oversampling;
        if (pos <= -1.0 || pos >= static_cast<double>(samples.size()))
            return 0.0;
        const double fidx = std::floor(pos);
        const int i0 = static_cast<int>(fidx);
        const double frac = pos - fidx;
        const double a = (i0 >= 0 && i0 < static_cast<int>(samples.size()))
                             ? samples[static_cast<std::size_t>(i0)] : 0.0;
        const int i1 = i0 + 1;
        const double b = (i1 >= 0 && i1 < static_cast<int>(samples.size()))
                             ? samples[static_cast<std::size_t>(i1)] : 0.0;
        return a + (b - a) * frac;
    }

    // Cursor k seen when sampling at fractional phase offset phi (UI) from the
    // nominal cursor instant.
    double cursor_at_phase(int k, double phi) const { return value_at(k + phi); }
};

// Build an SBR with exactly the given UI-spaced cursors, using a raised-cosine
// interpolation kernel of one-UI half-width between them. cursors[precursors]
// is h(0).
inline SingleBitResponse sbr_from_cursors(const std::vector<double>& cursors,
                                          int precursors, int oversampling = 32) {
    if (cursors.empty())
        throw std::invalid_argument("sbr_from_cursors: empty cursor list");
    if (precursors < 0 || precursors >= static_cast<int>(cursors.size()))
        throw std::invalid_argument("sbr_from_cursors: precursor index out of range");
    const int m = static_cast<int>(cursors.size());
    SingleBitResponse sbr;
    sbr.oversampling = oversampling;
    sbr.cursor_index = (precursors + 1) * oversampling;
    sbr.samples.assign(static_cast<std::size_t>((m + 1) * oversampling + 1), 0.0);
    for (std::size_t i = 0; i < sbr.samples.size(); ++i) {
        const double t = (static_cast<double>(static_cast<int>(i) - sbr.cursor_index)) /
                         oversampling;
        double v = 0.0;
        for (int k = 0; k < m; ++k) {
            const double dt = t - (k - precursors);
            if (dt > -1.0 && dt < 1.0)
                v += cursors[static_cast<std::size_t>(k)] *
                     0.5 * (1.0 + std::cos(3.14159265358979323846 * dt));
        }
        sbr.samples[i] = v;
    }
    sbr.validate();
    return sbr;
}

// Two-pole low-pass channel template: a 1-UI rectangular pulse through two
// identical real poles placed so the magnitude loss at Nyquist (f = 1/(2 UI))
// matches loss_db_at_nyquist. Peak is normalized to `amplitude`.
inline SingleBitResponse sbr_lowpass_template(double loss_db_at_nyquist,
                                              int oversampling = 32,
                                              int span_ui = 12,
                                              double amplitude = 1.0) {
    if (loss_db_at_nyquist <= 0.0)
        throw std::invalid_argument("sbr_lowpass_template: loss must be positive");
    // each pole contributes half the loss: |1/(1+jf/fp)| at f_nyq
    const double per_pole = std::pow(10.0, loss_db_at_nyquist / 40.0);
    const double ratio = std::sqrt(per_pole * per_pole - 1.0); // f_nyq / fp
    const double fp_ui = 0.5 / ratio;                          // pole in 1/UI units
    const double alpha = std::exp(-2.0 * 3.14159265358979323846 * fp_ui / oversampling);

    SingleBitResponse sbr;
    sbr.oversampling = oversampling;
    const int n = span_ui * oversampling;
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < oversampling; ++i)
        x[static_cast<std::size_t>(i)] = 1.0;
    // two cascaded one-pole sections
    for (int pass = 0; pass < 2; ++pass) {
        double y = 0.0;
        for (auto& v : x) {
            y = alpha * y + (1.0 - alpha) * v;
            v = y;
        }
    }
    const auto peak = std::max_element(x.begin(), x.end());
    const double scale = amplitude / *peak;
    for (auto& v : x)
        v *= scale;
    // pad one UI of leading zeros so the precursor window is in range
    sbr.samples.assign(static_cast<std::size_t>(oversampling), 0.0);
    sbr.samples.insert(sbr.samples.end(), x.begin(), x.end());
    sbr.cursor_index = static_cast<int>(peak - x.begin()) + oversampling;
    sbr.validate();
    return sbr;
}

// CSV import/export. Header row declares the geometry, then one sample (volts)
// per line:
//   oversampling=32,cursor_index=64
//   0.0
//   ...
inline SingleBitResponse load_sbr_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("SBR csv: missing header");
    SingleBitResponse sbr;
    bool have_os = false, have_ci = false;
    std::stringstream hs(header);
    std::string field;
    while (std::getline(hs, field, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos)
            continue;
        const std::string key = field.substr(0, eq);
        const std::string val = field.substr(eq + 1);
        if (key == "oversampling") {
            sbr.oversampling = std::stoi(val);
            have_os = true;
        } else if (key == "cursor_index") {
            sbr.cursor_index = std::stoi(val);
            have_ci = true;
        }
    }
    if (!have_os || !have_ci)
        throw std::runtime_error("SBR csv: header must declare oversampling and cursor_index");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        sbr.samples.push_back(std::stod(line));
    }
    sbr.validate();
    return sbr;
}

inline SingleBitResponse load_sbr_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("SBR csv: cannot open " + path);
    return load_sbr_csv(f);
}

inline void save_sbr_csv(const SingleBitResponse& sbr, std::ostream& out) {
    out << "oversampling=" << sbr.oversampling << ",cursor_index=" << sbr.cursor_index
        << "\n";
    char buf[40];
    for (double v : sbr.samples) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    }
}

} // namespace baudrx
