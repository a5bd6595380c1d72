#include <gtest/gtest.h>

#include <map>

#include "test_support.hpp"

using namespace qfda;
using namespace qfda::testing;

namespace {

// Repeatedly picks the nearest unused point (lowest index on ties), then
// scans classes upward for the strict maximum vote.
int brute_knn(const Eigen::MatrixXd& train, const std::vector<int>& labels, const Eigen::VectorXd& q, int k) {
    std::vector<bool> used(static_cast<std::size_t>(train.cols()), false);
    std::map<int, int> votes;
    for (int r = 0; r < k; ++r) {
        Eigen::Index best = -1;
        for (Eigen::Index i = 0; i < train.cols(); ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            if (best < 0 || (train.col(i) - q).squaredNorm() < (train.col(best) - q).squaredNorm()) best = i;
        }
        used[static_cast<std::size_t>(best)] = true;
        ++votes[labels[static_cast<std::size_t>(best)]];
    }
    int winner = -1, top = 0;
    for (const auto& [cls, v] : votes)
        if (v > top) winner = cls, top = v;
    return winner;
}

Projection proj(Eigen::MatrixXd coords, std::vector<int> labels) { return {std::move(coords), std::move(labels)}; }

}  // namespace

TEST(Knn, SelfClassificationIsExactWithK1) {
    auto& rng = rng_for(91);
    const auto p = proj(random_matrix(4, 30, rng), cyclic_labels(30, 5));
    EXPECT_EQ(knn_error(p, p, 1), 0.0);
}

TEST(Knn, SeparatedClusters) {
    Eigen::MatrixXd train(1, 6), eval(1, 4);
    train << -10, -9, -11, 10, 9, 11;
    eval << -8, -12, 8, 12;
    EXPECT_EQ(knn_error(proj(train, {0, 0, 0, 1, 1, 1}), proj(eval, {0, 0, 1, 1}), 3), 0.0);
    EXPECT_EQ(knn_error(proj(train, {0, 0, 0, 1, 1, 1}), proj(eval, {1, 0, 1, 0}), 3), 0.5);
}

TEST(Knn, TieRules) {
    Eigen::MatrixXd train(1, 4);
    train << -1, 1, 3, -3;
    const Eigen::VectorXd q = Eigen::VectorXd::Zero(1);
    // Equal distances: the lower index (class 1) wins with k = 1.
    EXPECT_EQ(knn_predict(train, {1, 0, 0, 1}, q, 1, 2), 1);
    // One vote each: the smaller class id wins.
    EXPECT_EQ(knn_predict(train, {1, 0, 0, 1}, q, 2, 2), 0);
}

TEST(Knn, MatchesBruteForceOracle) {
    auto& rng = rng_for(92);
    for (int t = 0; t < 20; ++t) {
        // Integer grid coordinates make exact distance ties common.
        Eigen::MatrixXd train = random_matrix(2, 20, rng, 2.0).array().round();
        std::vector<int> labels(20);
        for (int i = 0; i < 20; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 3);
        for (int j = 0; j < 10; ++j) {
            const Eigen::VectorXd q = random_matrix(2, 1, rng, 2.0).array().round();
            for (int k : {1, 3, 4})
                EXPECT_EQ(knn_predict(train, labels, q, k, 3), brute_knn(train, labels, q, k));
        }
    }
}

TEST(Knn, Errors) {
    auto& rng = rng_for(93);
    const auto a = proj(random_matrix(3, 5, rng), cyclic_labels(5, 2));
    EXPECT_THROW(knn_error(a, proj(Eigen::MatrixXd(3, 0), {}), 1), DataError);
    EXPECT_THROW(knn_error(a, proj(random_matrix(2, 3, rng), cyclic_labels(3, 2)), 1), DimensionError);
    EXPECT_THROW(knn_error(a, a, 0), ValueError);
    EXPECT_THROW(knn_error(a, a, 6), ValueError);
}

TEST(EvalReport, PerDimensionSweepAndStatistics) {
    auto& rng = rng_for(94);
    const auto train = random_spectra(8, 8, 30, 3, rng);
    const auto eval = random_spectra(8, 8, 12, 3, rng);
    Subspace s;
    s.u = random_matrix(64, 6, rng);
    s.eigenvalues = Eigen::VectorXd::LinSpaced(6, 6, 1);
    const auto r = evaluate_subspace(s, train, eval, 1, 4, "val", "qfda");
    ASSERT_EQ(r.per_dim_errors.size(), 4u);
    EXPECT_FALSE(r.truncated);
    for (int q = 1; q <= 4; ++q) {
        const Projection tq = proj(s.u.leftCols(q).transpose() * train.coeffs, train.labels);
        const Projection eq = proj(s.u.leftCols(q).transpose() * eval.coeffs, eval.labels);
        EXPECT_EQ(r.per_dim_errors[static_cast<std::size_t>(q - 1)], knn_error(tq, eq, 1));
    }
    double mean = 0.0;
    for (double e : r.per_dim_errors) mean += e / 4.0;
    double var = 0.0;
    for (double e : r.per_dim_errors) var += (e - mean) * (e - mean) / 4.0;
    EXPECT_NEAR(r.mean, mean, 1e-15);
    EXPECT_NEAR(r.std, std::sqrt(var), 1e-15);

    const auto t = evaluate_subspace(s, train, eval, 1, 10);
    EXPECT_TRUE(t.truncated);
    EXPECT_EQ(t.per_dim_errors.size(), 6u);
}

TEST(EvalReport, SingleDimensionHasZeroSpread) {
    EvalReport r;
    r.per_dim_errors = {0.25};
    r.aggregate();
    EXPECT_EQ(r.mean, 0.25);
    EXPECT_EQ(r.std, 0.0);
}

TEST(EvalReport, ErrorsCsvRoundTrip) {
    EvalReport r;
    r.per_dim_errors = {0.5, 0.1, 1.0 / 3.0, 0.0};
    r.aggregate();
    const auto dir = scratch_dir("errors");
    write_errors_csv(r, dir / "e.csv");
    const auto back = read_errors_csv(dir / "e.csv");
    EXPECT_EQ(back.per_dim_errors, r.per_dim_errors);
    EXPECT_EQ(back.mean, r.mean);
    EXPECT_EQ(read_file(dir / "e.csv").substr(0, 12), "q,error\n1,0.");
    std::ofstream(dir / "bad.csv") << "dims,err\n1,0.5\n";
    EXPECT_THROW(read_errors_csv(dir / "bad.csv"), FormatError);
}
