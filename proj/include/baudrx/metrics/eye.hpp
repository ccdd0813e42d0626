#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace baudrx {

// 2D eye histogram (phase bins x voltage bins), kept per transmitted symbol
// class so the vertical margin between classes can be read off directly.
// Two partial eyes merge associatively.
struct EyeDiagram {
    int phase_bins = 64;
    int v_bins = 256;
    double v_min = -1.5;
    double v_max = 1.5;
    int lock_phase_bin = 0; // column the CDR was locked to while accumulating
    std::vector<std::uint64_t> counts; // [class][phase][vbin], class 0 = symbol -1
    std::uint64_t total = 0;

    EyeDiagram() { counts.assign(2ull * phase_bins * v_bins, 0); }
    EyeDiagram(int pb, int vb, double lo, double hi)
        : phase_bins(pb), v_bins(vb), v_min(lo), v_max(hi) {
        counts.assign(2ull * pb * vb, 0);
    }

    int phase_bin(double phase_ui) const {
        double p = phase_ui - std::floor(phase_ui);
        int b = static_cast<int>(p * phase_bins);
        return std::clamp(b, 0, phase_bins - 1);
    }

    void add(double phase_ui, double volts, int symbol) {
        const int pb = phase_bin(phase_ui);
        int vb = static_cast<int>((volts - v_min) / (v_max - v_min) * v_bins);
        vb = std::clamp(vb, 0, v_bins - 1);
        const std::size_t cls = symbol > 0 ? 1 : 0;
        ++counts[(cls * phase_bins + static_cast<std::size_t>(pb)) * v_bins +
                 static_cast<std::size_t>(vb)];
        ++total;
    }

    std::uint64_t at(int cls, int pb, int vb) const {
        return counts[(static_cast<std::size_t>(cls) * phase_bins +
                       static_cast<std::size_t>(pb)) * v_bins + static_cast<std::size_t>(vb)];
    }

    void merge(const EyeDiagram& other) {
        if (other.counts.size() != counts.size() || other.v_min != v_min ||
            other.v_max != v_max)
            throw std::invalid_argument("EyeDiagram::merge: geometry mismatch");
        for (std::size_t i = 0; i < counts.size(); ++i)
            counts[i] += other.counts[i];
        total += other.total;
    }

    double bin_center(int vb) const {
        return v_min + (vb + 0.5) * (v_max - v_min) / v_bins;
    }
    double bin_width() const { return (v_max - v_min) / v_bins; }

    void write_csv(std::ostream& out) const {
        out << "phase_bin,v_bin,phase_ui,volts,count_low,count_high\n";
        for (int pb = 0; pb < phase_bins; ++pb)
            for (int vb = 0; vb < v_bins; ++vb)
                out << pb << ',' << vb << ',' << (pb + 0.5) / phase_bins << ','
                    << bin_center(vb) << ',' << at(0, pb, vb) << ',' << at(1, pb, vb)
                    << '\n';
    }
};

// Vertical eye margin at the lock phase: distance between the innermost
// populated voltage levels of the two symbol classes (bins with fewer than
// ber_floor * class-total hits are ignored). Negative when the eye is closed.
inline double measure_vem(const EyeDiagram& eye, double ber_floor = 0.0) {
    if (eye.total == 0)
        throw std::invalid_argument("measure_vem: empty eye");
    const int pb = eye.lock_phase_bin;
    std::uint64_t tot_hi = 0, tot_lo = 0;
    for (int vb = 0; vb < eye.v_bins; ++vb) {
        tot_hi += eye.at(1, pb, vb);
        tot_lo += eye.at(0, pb, vb);
    }
    if (tot_hi == 0 || tot_lo == 0)
        throw std::invalid_argument("measure_vem: lock column lacks one symbol class");
    const auto min_count = [&](std::uint64_t tot) {
        return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ber_floor * tot));
    };
    int hi_inner = -1, lo_inner = -1;
    for (int vb = 0; vb < eye.v_bins; ++vb)
        if (eye.at(1, pb, vb) >= min_count(tot_hi)) {
            hi_inner = vb;
            break;
        }
    for (int vb = eye.v_bins - 1; vb >= 0; --vb)
        if (eye.at(0, pb, vb) >= min_count(tot_lo)) {
            lo_inner = vb;
            break;
        }
    return eye.bin_center(hi_inner) - eye.bin_center(lo_inner);
}

} // namespace baudrx
