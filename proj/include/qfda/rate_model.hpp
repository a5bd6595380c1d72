#pragma once

// Entropy rate of quantized DCT coefficients under a Gaussian kernel
// density estimate of each frequency's distribution.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <vector>

#include "qfda/block_dct.hpp"
#include "qfda/errors.hpp"
#include "qfda/quantizer.hpp"

namespace qfda {

constexpr double kMinBandwidth = 1e-6;

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Equal-weight Gaussian mixture centered on the samples.
class KernelDensity {
public:
    KernelDensity() = default;

    KernelDensity(std::vector<double> samples, double bandwidth)
        : samples_(std::move(samples)), bandwidth_(bandwidth) {
        if (samples_.empty()) throw DataError("kernel density needs at least one sample");
        if (!(bandwidth_ > 0.0)) throw ValueError("bandwidth must be positive");
        std::sort(samples_.begin(), samples_.end());
    }

    // Silverman's rule 0.9 * min(sd, IQR / 1.34) * N^(-1/5), using sd alone
    // when the IQR is zero, floored at kMinBandwidth.
    static double silverman_bandwidth(std::vector<double> samples) {
        const auto n = static_cast<double>(samples.size());
        if (samples.size() < 2) return kMinBandwidth;
        // Sorted first so the sums, and hence h, do not depend on input order.
        std::sort(samples.begin(), samples.end());
        double mean = 0.0;
        for (double v : samples) mean += v;
        mean /= n;
        double ss = 0.0;
        for (double v : samples) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / (n - 1.0));
        auto quantile = [&](double q) {
            const double pos = q * (n - 1.0);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const auto hi = std::min(lo + 1, samples.size() - 1);
            return samples[lo] + (pos - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
        };
        const double iqr = quantile(0.75) - quantile(0.25);
        const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
        return std::max(kMinBandwidth, 0.9 * spread * std::pow(n, -0.2));
    }

    static KernelDensity fit(std::vector<double> samples) {
        const double h = silverman_bandwidth(samples);
        return {std::move(samples), h};
    }

    double bandwidth() const { return bandwidth_; }
    const std::vector<double>& samples() const { return samples_; }

    double pdf(double x) const {
        const double norm = 1.0 / (bandwidth_ * std::sqrt(2.0 * std::numbers::pi));
        double acc = 0.0;
        for (double s : samples_) {
            const double z = (x - s) / bandwidth_;
            acc += std::exp(-0.5 * z * z);
        }
        return acc * norm / static_cast<double>(samples_.size());
    }

    // Kernels more than kTail bandwidths below x contribute exactly 1, those
    // more than kTail above contribute under 1e-300 and are dropped.
    double cdf(double x) const {
        if (x == std::numeric_limits<double>::infinity()) return 1.0;
        if (x == -std::numeric_limits<double>::infinity()) return 0.0;
        constexpr double kTail = 40.0;
        const auto first = std::lower_bound(samples_.begin(), samples_.end(), x - kTail * bandwidth_);
        const auto last = std::upper_bound(first, samples_.end(), x + kTail * bandwidth_);
        double acc = static_cast<double>(first - samples_.begin());
        for (auto it = first; it != last; ++it) acc += normal_cdf((x - *it) / bandwidth_);
        return acc / static_cast<double>(samples_.size());
    }

private:
    std::vector<double> samples_;
    double bandwidth_ = 1.0;
};

struct FrequencyDensity {
    std::array<KernelDensity, kFrequencies> kernels;
    std::uint64_t seed = 0;
    Eigen::Index bootstrap_size = 0;
};

// Pools frequency k over every block of the bootstrapped images. Uses the
// same draw as estimate_bounds for equal (s, seed).
inline FrequencyDensity fit_density(const SpectrumSet& train, Eigen::Index s, std::uint64_t seed) {
    if (train.size() == 0) throw DataError("empty training set");
    const auto images = bootstrap_indices(train.size(), s, seed);
    FrequencyDensity density;
    density.seed = seed;
    density.bootstrap_size = s;
    for (int k = 0; k < kFrequencies; ++k) {
        const Eigen::VectorXd v = frequency_view(train, k, images);
        density.kernels[static_cast<std::size_t>(k)] =
            KernelDensity::fit(std::vector<double>(v.data(), v.data() + v.size()));
    }
    return density;
}

// Preimage of one output level. Endpoints may be infinite.
struct Interval {
    double lower;
    double upper;
    bool lower_closed;
    bool upper_closed;
    double level;

    bool contains(double x) const {
        const bool above = lower_closed ? x >= lower : x > lower;
        const bool below = upper_closed ? x <= upper : x < upper;
        return above && below;
    }
};

// The m_k preimages q^-1(level), ascending. Positive levels j occupy
// [j ell/t1, (j+1) ell/t1), negative levels (-(j+1) ell/t1, -j ell/t1], zero
// the open (-ell/t1, ell/t1); clipping folds both tails into the outermost
// intervals.
inline std::vector<Interval> interval_partition(const StepParams& p) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double width = static_cast<double>(p.ell) / p.t1;
    std::vector<Interval> out;
    for (int i = p.lowest_index(); i <= p.highest_index(); ++i) {
        Interval iv{};
        iv.level = i == 0 ? 0.0 : p.step * i;
        if (i < 0) {
            iv.lower = (i == p.lowest_index()) ? -inf : (i - 1) * width;
            iv.upper = i * width;
            iv.lower_closed = false;
            iv.upper_closed = true;
        } else if (i > 0) {
            iv.lower = i * width;
            iv.upper = (i == p.highest_index()) ? inf : (i + 1) * width;
            iv.lower_closed = true;
            iv.upper_closed = false;
        } else {
            iv.lower = (p.lowest_index() == 0) ? -inf : -width;
            iv.upper = (p.highest_index() == 0) ? inf : width;
            iv.lower_closed = false;
            iv.upper_closed = false;
        }
        out.push_back(iv);
    }
    return out;
}

inline std::vector<Interval> interval_partition(const QuantizerSpec& spec, int k) {
    if (k < 0 || k >= kFrequencies) throw IndexError("frequency index out of range");
    return interval_partition(spec.frequency(k));
}

// Kernel mass in each interval, as differences of the mixture CDF.
inline std::vector<double> interval_probabilities(const KernelDensity& density,
                                                  const std::vector<Interval>& intervals) {
    std::vector<double> p;
    p.reserve(intervals.size());
    double prev = density.cdf(intervals.front().lower);
    for (const auto& iv : intervals) {
        const double c = density.cdf(iv.upper);
        p.push_back(std::max(0.0, c - prev));
        prev = c;
    }
    return p;
}

// -sum p log2 p with 0 log 0 = 0.
inline double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return std::max(0.0, h);
}

inline double frequency_rate(const KernelDensity& density, const StepParams& params) {
    return entropy_bits(interval_probabilities(density, interval_partition(params)));
}

struct RateReport {
    std::array<double, kFrequencies> per_frequency{};
    double average = 0.0;
    std::array<std::vector<Interval>, kFrequencies> intervals_used;
    LevelVector levels;
};

inline RateReport rate(const FrequencyDensity& density, const QuantizerSpec& spec) {
    RateReport r;
    r.levels = spec.levels();
    double sum = 0.0;
    for (int k = 0; k < kFrequencies; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        r.intervals_used[uk] = interval_partition(spec.frequency(k));
        r.per_frequency[uk] = entropy_bits(interval_probabilities(density.kernels[uk], r.intervals_used[uk]));
        sum += r.per_frequency[uk];
    }
    r.average = sum / kFrequencies;
    return r;
}

// 64 rows "k,m_k,r_k" after a header, then "mean,,r_bar".
inline void write_rate_csv(const RateReport& report, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FileError("cannot write " + path.string());
    out << std::setprecision(17) << "k,m_k,r_k\n";
    for (int k = 0; k < kFrequencies; ++k)
        out << k << ',' << report.levels.m[static_cast<std::size_t>(k)] << ','
            << report.per_frequency[static_cast<std::size_t>(k)] << '\n';
    out << "mean,," << report.average << '\n';
}

}  // namespace qfda
