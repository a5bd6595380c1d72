#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace qfda;
using namespace qfda::testing;

namespace {

// Composite trapezoid of the mixture pdf over [a, b].
double trapezoid(const KernelDensity& kde, double a, double b, long points) {
    if (!(b > a)) return 0.0;
    const double h = (b - a) / static_cast<double>(points - 1);
    double s = 0.5 * (kde.pdf(a) + kde.pdf(b));
    for (long i = 1; i < points - 1; ++i) s += kde.pdf(a + h * static_cast<double>(i));
    return s * h;
}

std::vector<double> normal_samples(std::size_t n, std::uint64_t seed, double mean = 0.0, double sd = 1.0) {
    auto& rng = rng_for(seed);
    std::normal_distribution<double> d(mean, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

}  // namespace

TEST(KernelDensity, SilvermanBandwidthByHand) {
    const std::vector<double> s{1, 2, 3, 4, 5};
    const double sd = std::sqrt(2.5);
    const double iqr = 4.0 - 2.0;
    const double expect = 0.9 * std::min(sd, iqr / 1.34) * std::pow(5.0, -0.2);
    EXPECT_NEAR(KernelDensity::silverman_bandwidth(s), expect, 1e-14);
}

TEST(KernelDensity, IdenticalSamplesHitTheFloor) {
    const auto kde = KernelDensity::fit(std::vector<double>(50, 3.25));
    EXPECT_EQ(kde.bandwidth(), kMinBandwidth);
    EXPECT_NEAR(kde.cdf(3.25 - 1e-4), 0.0, 1e-12);
    EXPECT_NEAR(kde.cdf(3.25 + 1e-4), 1.0, 1e-12);
    EXPECT_NEAR(kde.cdf(3.25), 0.5, 1e-12);
}

TEST(KernelDensity, ZeroIqrFallsBackToSd) {
    std::vector<double> s(100, 0.0);
    s[0] = 10.0;
    const double n = 100.0;
    const double mean = 0.1;
    const double sd = std::sqrt(((10 - mean) * (10 - mean) + 99 * mean * mean) / (n - 1));
    EXPECT_NEAR(KernelDensity::silverman_bandwidth(s), 0.9 * sd * std::pow(n, -0.2), 1e-14);
}

TEST(KernelDensity, StandardNormalCdfAtZero) {
    const auto kde = KernelDensity::fit(normal_samples(10000, 41));
    EXPECT_NEAR(kde.cdf(0.0), 0.5, 0.02);
    EXPECT_NEAR(kde.cdf(1.0), normal_cdf(1.0), 0.02);
}

TEST(KernelDensity, TwoPointMixtureIsSymmetric) {
    const KernelDensity kde({-1.0, 1.0}, 1.0);
    for (double x : {0.0, 0.3, 1.0, 2.7, 9.0}) EXPECT_NEAR(kde.pdf(x), kde.pdf(-x), 1e-12);
    EXPECT_NEAR(kde.cdf(0.0), 0.5, 1e-12);
    const double expect = 0.5 * (std::exp(-0.5) + std::exp(-0.5 * 9)) / std::sqrt(2 * std::numbers::pi);
    EXPECT_NEAR(kde.pdf(2.0), expect, 1e-15);
}

TEST(KernelDensity, CdfMatchesPdfQuadrature) {
    const auto kde = KernelDensity::fit(normal_samples(40, 42, 1.0, 2.0));
    const double lo = kde.samples().front() - 15 * kde.bandwidth();
    for (double x : {-3.0, 0.0, 1.5, 4.0})
        EXPECT_NEAR(kde.cdf(x), trapezoid(kde, lo, x, 200001), 1e-8);
}

TEST(KernelDensity, Errors) {
    EXPECT_THROW(KernelDensity({}, 1.0), DataError);
    EXPECT_THROW(KernelDensity({1.0}, 0.0), ValueError);
}

TEST(IntervalPartition, FiveLevels) {
    const auto iv = interval_partition(StepParams::make(7, 5));
    ASSERT_EQ(iv.size(), 5u);
    EXPECT_TRUE(std::isinf(iv[0].lower) && iv[0].lower < 0);
    EXPECT_NEAR(iv[0].upper, -14.0 / 3, 1e-12);
    EXPECT_NEAR(iv[1].upper, -7.0 / 3, 1e-12);
    EXPECT_NEAR(iv[2].upper, 7.0 / 3, 1e-12);
    EXPECT_NEAR(iv[3].upper, 14.0 / 3, 1e-12);
    EXPECT_TRUE(std::isinf(iv[4].upper) && iv[4].upper > 0);
    EXPECT_EQ(iv[0].level, -7.0);
    EXPECT_EQ(iv[4].level, 7.0);
}

TEST(IntervalPartition, FourLevelsMergeNegativeTail) {
    const auto iv = interval_partition(StepParams::make(7, 4));
    ASSERT_EQ(iv.size(), 4u);
    EXPECT_TRUE(std::isinf(iv[0].lower));
    EXPECT_NEAR(iv[0].upper, -7.0 / 3, 1e-12);
    EXPECT_TRUE(iv[0].upper_closed);
    EXPECT_EQ(iv[0].level, -3.5);
}

TEST(IntervalPartition, PreimagesOfTheStaircaseCoverR) {
    for (int ell = 2; ell <= 16; ++ell)
        for (int m = 2; m <= ell; ++m) {
            const auto p = StepParams::make(ell, m);
            const auto iv = interval_partition(p);
            ASSERT_EQ(static_cast<int>(iv.size()), m);
            for (std::size_t t = 1; t < iv.size(); ++t) {
                EXPECT_EQ(iv[t].lower, iv[t - 1].upper);
                EXPECT_NE(iv[t].lower_closed, iv[t - 1].upper_closed);
            }
            for (double x = -ell - 2.0; x <= ell + 2.0; x += 0.0137) {
                int hits = 0;
                for (const auto& i : iv)
                    if (i.contains(x)) {
                        ++hits;
                        EXPECT_EQ(i.level, p.apply(x)) << "ell=" << ell << " m=" << m << " x=" << x;
                    }
                EXPECT_EQ(hits, 1);
            }
        }
}

TEST(Rate, ProbabilitiesSumToOne) {
    const auto kde = KernelDensity::fit(normal_samples(300, 43, 0.5, 3.0));
    for (int ell = 2; ell <= 16; ++ell)
        for (int m = 2; m <= ell; ++m) {
            const auto p = interval_probabilities(kde, interval_partition(StepParams::make(ell, m)));
            double s = 0.0;
            for (double v : p) s += v;
            EXPECT_NEAR(s, 1.0, 1e-9);
        }
}

TEST(Rate, ClosedFormMatchesQuadrature) {
    const auto kde = KernelDensity::fit(normal_samples(60, 44, 0.0, 3.0));
    const auto iv = interval_partition(StepParams::make(7, 5));
    const auto p = interval_probabilities(kde, iv);
    const double lo = kde.samples().front() - 12 * kde.bandwidth();
    const double hi = kde.samples().back() + 12 * kde.bandwidth();
    for (std::size_t t = 0; t < iv.size(); ++t) {
        const double q = trapezoid(kde, std::max(lo, iv[t].lower), std::min(hi, iv[t].upper), 1000000);
        EXPECT_NEAR(p[t], q, 1e-6) << "interval " << t;
    }
}

TEST(Rate, PointMassHasZeroRate) {
    const KernelDensity kde(std::vector<double>(10, 0.1), 1e-3);
    EXPECT_NEAR(frequency_rate(kde, StepParams::make(7, 5)), 0.0, 1e-12);
}

TEST(Rate, EquiprobableLevelsGiveLog2M) {
    // One narrow kernel on each output value: every interval holds 1/m.
    for (int ell = 2; ell <= 16; ++ell)
        for (int m = 2; m <= ell; ++m) {
            const auto p = StepParams::make(ell, m);
            const KernelDensity kde(p.alphabet(), 1e-3);
            EXPECT_NEAR(frequency_rate(kde, p), std::log2(m), 1e-9) << "ell=" << ell << " m=" << m;
        }
}

TEST(Rate, BoundedByLog2MAndOrderInvariant) {
    auto v = normal_samples(200, 45, 0.0, 4.0);
    const auto a = KernelDensity::fit(v);
    std::reverse(v.begin(), v.end());
    const auto b = KernelDensity::fit(v);
    for (int m = 2; m <= 12; ++m) {
        const auto p = StepParams::make(12, m);
        const double r = frequency_rate(a, p);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, std::log2(m) + 1e-9);
        EXPECT_EQ(r, frequency_rate(b, p));
    }
}

TEST(Rate, RefinementNeverLowersEntropy) {
    // The 2-level cut sits at ell/2; an m-level partition refines it when
    // t1 is even. Then the fine masses regroup exactly into the coarse ones.
    const auto kde = KernelDensity::fit(normal_samples(150, 46, 1.0, 3.0));
    for (int ell = 4; ell <= 16; ++ell)
        for (int m = 3; m <= ell; ++m) {
            const auto fine = StepParams::make(ell, m);
            if (fine.t1 % 2 != 0) continue;
            const auto iv = interval_partition(fine);
            const auto pf = interval_probabilities(kde, iv);
            const auto pc = interval_probabilities(kde, interval_partition(StepParams::make(ell, 2)));
            double below = 0.0;
            for (std::size_t t = 0; t < iv.size(); ++t)
                if (iv[t].upper <= ell / 2.0) below += pf[t];
            EXPECT_NEAR(below, pc[0], 1e-12);
            EXPECT_GE(entropy_bits(pf), entropy_bits(pc) - 1e-12);
        }
}

TEST(Rate, EntropyWithinOneBitOfShannonCodeLength) {
    // Explicit code lengths l_t = ceil(-log2 p_t): H <= sum p l < H + 1.
    const auto kde = KernelDensity::fit(normal_samples(120, 47, -1.0, 2.5));
    for (int m = 2; m <= 9; ++m) {
        const auto p = interval_probabilities(kde, interval_partition(StepParams::make(9, m)));
        double code = 0.0;
        for (double v : p)
            if (v > 0) code += v * std::ceil(-std::log2(v));
        const double h = entropy_bits(p);
        EXPECT_LE(h, code + 1e-12);
        EXPECT_LT(code, h + 1.0);
    }
}

TEST(FitDensity, SharesBootstrapWithBounds) {
    auto& rng = rng_for(48);
    const auto s = random_spectra(16, 16, 25, 2, rng, 6.0);
    const auto density = fit_density(s, 12, 99);
    const auto bounds = estimate_bounds(s, 12, 99);
    const auto idx = bootstrap_indices(25, 12, 99);
    for (int k = 0; k < 64; ++k) {
        const Eigen::VectorXd v = frequency_view(s, k, idx);
        std::vector<double> expect(v.data(), v.data() + v.size());
        std::sort(expect.begin(), expect.end());
        const auto& kde = density.kernels[static_cast<std::size_t>(k)];
        EXPECT_EQ(kde.samples(), expect);
        EXPECT_GT(kde.bandwidth(), 0.0);
        const double peak = std::max(std::abs(expect.front()), std::abs(expect.back()));
        EXPECT_EQ(bounds.ell[static_cast<std::size_t>(k)], std::max(2L, std::lround(peak)));
    }
}

TEST(RateReport, AverageCsvAndBounds) {
    auto& rng = rng_for(49);
    const auto s = random_spectra(8, 16, 30, 2, rng, 6.0);
    const auto b = estimate_bounds(s, 30, 1);
    const auto density = fit_density(s, 30, 1);
    LevelVector m;
    for (int k = 0; k < 64; ++k) m.m[static_cast<std::size_t>(k)] = 2 + k % (b.ell[static_cast<std::size_t>(k)] - 1);
    const auto r = rate(density, QuantizerSpec(b, m));
    double sum = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double rk = r.per_frequency[static_cast<std::size_t>(k)];
        EXPECT_GE(rk, 0.0);
        EXPECT_LE(rk, std::log2(m.m[static_cast<std::size_t>(k)]) + 1e-9);
        EXPECT_EQ(static_cast<int>(r.intervals_used[static_cast<std::size_t>(k)].size()), m.m[static_cast<std::size_t>(k)]);
        sum += rk;
    }
    EXPECT_NEAR(r.average, sum / 64, 1e-12);

    const auto dir = scratch_dir("ratecsv");
    write_rate_csv(r, dir / "rate.csv");
    std::ifstream in(dir / "rate.csv");
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 66u);
    EXPECT_EQ(lines.front(), "k,m_k,r_k");
    EXPECT_EQ(lines[1].rfind("0," + std::to_string(m.m[0]) + ",", 0), 0u);
    EXPECT_EQ(lines.back().rfind("mean,,", 0), 0u);
    EXPECT_NEAR(std::stod(lines.back().substr(6)), r.average, 1e-15);
}
