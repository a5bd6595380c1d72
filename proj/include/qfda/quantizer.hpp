#pragma once

// Per-frequency uniform quantization of block-DCT coefficients.
//
// Frequency k has a clipping bound ell_k and m_k output levels (2 <= m_k <= ell_k).
// With t1 = (m_k + 2) / 2 for even m_k and (m_k + 1) / 2 for odd m_k, a
// coefficient is clipped to [-ell_k, ell_k] and mapped to
//   sign(x) * ell_k / (t1 - 1) * min(floor(t1 * |x| / ell_k), t1 - 1).
// For even m_k the negative side stops one step early: every x <= -t2, with
// t2 = ell_k (t1 - 2) / t1, maps to the lowest level -(t1 - 2) * ell_k / (t1 - 1).
// The min() keeps the top level at exactly ell_k.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qfda/block_dct.hpp"
#include "qfda/errors.hpp"

namespace qfda {

using FrequencyArray = std::array<int, kFrequencies>;

struct BoundVector {
    FrequencyArray ell{};
    std::uint64_t bootstrap_seed = 0;
    Eigen::Index bootstrap_size = 0;

    void validate() const {
        for (int e : ell)
            if (e < 2) throw ValueError("level bound below 2");
    }
};

struct LevelVector {
    FrequencyArray m{};

    static LevelVector filled(int value) {
        LevelVector v;
        v.m.fill(value);
        return v;
    }
    static LevelVector at_bounds(const BoundVector& b) { return {b.ell}; }

    void validate(const BoundVector& bounds) const {
        for (int k = 0; k < kFrequencies; ++k)
            if (m[k] < 2 || m[k] > bounds.ell[k])
                throw ValueError("level m_" + std::to_string(k) + " = " + std::to_string(m[k]) +
                                 " outside [2, " + std::to_string(bounds.ell[k]) + "]");
    }

    auto operator<=>(const LevelVector&) const = default;
};

// Staircase parameters for one frequency.
struct StepParams {
    int ell = 2;
    int m = 2;
    int t1 = 2;
    double t2 = 0.0;
    double step = 0.0;  // ell / (t1 - 1), spacing of output levels

    static StepParams make(int ell, int m) {
        if (ell < 2 || m < 2 || m > ell)
            throw ValueError("need 2 <= m <= ell, got m=" + std::to_string(m) + " ell=" + std::to_string(ell));
        StepParams p;
        p.ell = ell;
        p.m = m;
        p.t1 = (m % 2 == 0) ? (m + 2) / 2 : (m + 1) / 2;
        p.t2 = static_cast<double>(ell) * (p.t1 - 2) / p.t1;
        p.step = static_cast<double>(ell) / (p.t1 - 1);
        return p;
    }

    bool even() const { return m % 2 == 0; }

    // Signed level index in [-(t1-1) or -(t1-2), t1-1].
    int level_index(double x) const {
        const double e = ell;
        x = std::clamp(x, -e, e);
        if (even() && x <= -t2) return -(t1 - 2);
        const auto i = std::min(static_cast<int>(std::floor(t1 * std::abs(x) / e)), t1 - 1);
        return x < 0 ? -i : i;
    }

    double apply(double x) const {
        const int i = level_index(x);
        return i == 0 ? 0.0 : step * i;
    }

    int lowest_index() const { return even() ? -(t1 - 2) : -(t1 - 1); }
    int highest_index() const { return t1 - 1; }

    // Output alphabet, ascending; always m values.
    std::vector<double> alphabet() const {
        std::vector<double> a;
        for (int i = lowest_index(); i <= highest_index(); ++i) a.push_back(i == 0 ? 0.0 : step * i);
        return a;
    }
};

class QuantizerSpec {
public:
    QuantizerSpec(BoundVector bounds, LevelVector levels) : bounds_(bounds), levels_(levels) {
        bounds_.validate();
        levels_.validate(bounds_);
        for (int k = 0; k < kFrequencies; ++k) steps_[k] = StepParams::make(bounds_.ell[k], levels_.m[k]);
    }

    const BoundVector& bounds() const { return bounds_; }
    const LevelVector& levels() const { return levels_; }
    const StepParams& frequency(int k) const { return steps_.at(static_cast<std::size_t>(k)); }

    double apply(int k, double x) const { return steps_[static_cast<std::size_t>(k)].apply(x); }

private:
    BoundVector bounds_;
    LevelVector levels_;
    std::array<StepParams, kFrequencies> steps_{};
};

// s draws with replacement from [0, n).
inline std::vector<Eigen::Index> bootstrap_indices(Eigen::Index n, Eigen::Index s, std::uint64_t seed) {
    if (n < 1) throw DataError("cannot bootstrap from an empty set");
    if (s < 1) throw ValueError("bootstrap size must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(s));
    for (auto& i : idx) i = pick(rng);
    return idx;
}

inline BoundVector bounds_from_sample(const SpectrumSet& train, const std::vector<Eigen::Index>& images) {
    BoundVector b;
    for (int k = 0; k < kFrequencies; ++k) {
        const double peak = frequency_view(train, k, images).cwiseAbs().maxCoeff();
        b.ell[k] = std::max(2, static_cast<int>(std::lround(peak)));
    }
    b.bootstrap_size = static_cast<Eigen::Index>(images.size());
    return b;
}

// ell_k = max(2, round(max |F'(k)|)) over every block of s bootstrapped images.
inline BoundVector estimate_bounds(const SpectrumSet& train, Eigen::Index s, std::uint64_t seed) {
    if (train.size() == 0) throw DataError("empty training set");
    auto b = bounds_from_sample(train, bootstrap_indices(train.size(), s, seed));
    b.bootstrap_seed = seed;
    return b;
}

inline SpectrumSet quantize(const SpectrumSet& spectrum, const QuantizerSpec& spec) {
    SpectrumSet out = spectrum;
    const Eigen::Index blocks = spectrum.layout.blocks_per_image();
    for (Eigen::Index n = 0; n < out.size(); ++n)
        for (Eigen::Index b = 0; b < blocks; ++b)
            for (int k = 0; k < kFrequencies; ++k) {
                double& v = out.coeffs(b * kFrequencies + k, n);
                v = spec.apply(k, v);
            }
    return out;
}

// Rounds a continuous particle position onto {2..ell_k}: values above ell_k
// go to ell_k, below 2 go to 2, otherwise ceil(m - 0.5).
inline LevelVector project_levels(std::span<const double, kFrequencies> raw, const BoundVector& bounds) {
    LevelVector out;
    for (int k = 0; k < kFrequencies; ++k) {
        const double v = raw[static_cast<std::size_t>(k)];
        if (!std::isfinite(v)) throw ValueError("non-finite level at frequency " + std::to_string(k));
        const int hi = bounds.ell[k];
        if (v > hi)
            out.m[k] = hi;
        else if (v < 2.0)
            out.m[k] = 2;
        else
            out.m[k] = std::clamp(static_cast<int>(std::ceil(v - 0.5)), 2, hi);
    }
    return out;
}

inline std::string to_csv_line(const FrequencyArray& values) {
    std::ostringstream ss;
    for (int k = 0; k < kFrequencies; ++k) ss << (k ? "," : "") << values[k];
    return ss.str();
}

inline FrequencyArray parse_csv_line(const std::string& line) {
    FrequencyArray out{};
    std::istringstream ss(line);
    std::string tok;
    int k = 0;
    while (std::getline(ss, tok, ',')) {
        if (k >= kFrequencies) throw FormatError("more than 64 values in level line");
        try {
            std::size_t used = 0;
            out[static_cast<std::size_t>(k)] = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw FormatError("bad integer '" + tok + "' in level line");
        }
        ++k;
    }
    if (k != kFrequencies) throw FormatError("expected 64 values, got " + std::to_string(k));
    return out;
}

}  // namespace qfda
