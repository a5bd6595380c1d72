#pragma once

// k-nearest-neighbour error of projected data, swept over leading subspace
// dimensions.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "qfda/block_dct.hpp"
#include "qfda/config.hpp"
#include "qfda/discriminant.hpp"
#include "qfda/errors.hpp"

namespace qfda {

// Euclidean k-NN with majority vote. Distance ties go to the smaller training
// index, vote ties to the smaller class id.
inline int knn_predict(const Eigen::MatrixXd& train, const std::vector<int>& train_labels,
                       const Eigen::Ref<const Eigen::VectorXd>& query, int k, int num_classes) {
    const Eigen::Index n = train.cols();
    std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) dist[static_cast<std::size_t>(i)] = {(train.col(i) - query).squaredNorm(), i};
    const auto kk = static_cast<std::size_t>(k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
    std::vector<int> votes(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t i = 0; i < kk; ++i) ++votes[static_cast<std::size_t>(train_labels[static_cast<std::size_t>(dist[i].second)])];
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

inline double knn_error(const Projection& train, const Projection& eval, int k) {
    if (eval.coords.cols() == 0) throw DataError("empty evaluation set");
    if (train.coords.rows() != eval.coords.rows()) throw DimensionError("projections differ in dimension");
    if (k < 1 || k > train.coords.cols()) throw ValueError("k must be in [1, training size]");
    int c = 0;
    for (int l : train.labels) c = std::max(c, l + 1);
    for (int l : eval.labels) c = std::max(c, l + 1);
    Eigen::Index wrong = 0;
    for (Eigen::Index i = 0; i < eval.coords.cols(); ++i)
        if (knn_predict(train.coords, train.labels, eval.coords.col(i), k, c) != eval.labels[static_cast<std::size_t>(i)]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(eval.coords.cols());
}

struct EvalReport {
    std::vector<double> per_dim_errors;  // entry q-1 is the error at q dimensions
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    std::string split;
    std::string method;
    bool truncated = false;  // fewer than max_dims directions were available

    void aggregate() {
        const auto n = static_cast<double>(per_dim_errors.size());
        mean = 0.0;
        for (double e : per_dim_errors) mean += e;
        mean /= n;
        double ss = 0.0;
        for (double e : per_dim_errors) ss += (e - mean) * (e - mean);
        std = std::sqrt(ss / n);
    }
};

inline EvalReport evaluate_subspace(const Subspace& subspace, const SpectrumSet& train, const SpectrumSet& eval,
                                    int k, int max_dims, std::string split = {}, std::string method = {}) {
    if (subspace.p() < 1) throw DimensionError("empty subspace");
    if (max_dims < 1) throw ValueError("max_dims must be >= 1");
    const Eigen::Index dims = std::min<Eigen::Index>(max_dims, subspace.p());
    const auto full_train = project(subspace, train, dims);
    const auto full_eval = project(subspace, eval, dims);
    EvalReport r;
    r.split = std::move(split);
    r.method = std::move(method);
    r.truncated = dims < max_dims;
    for (Eigen::Index q = 1; q <= dims; ++q) {
        const Projection tq{full_train.coords.topRows(q), full_train.labels};
        const Projection eq{full_eval.coords.topRows(q), full_eval.labels};
        r.per_dim_errors.push_back(knn_error(tq, eq, k));
    }
    r.aggregate();
    return r;
}

// "q,error" rows.
inline void write_errors_csv(const EvalReport& report, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FileError("cannot write " + path.string());
    out << "q,error\n";
    for (std::size_t q = 0; q < report.per_dim_errors.size(); ++q)
        out << q + 1 << ',' << format_double(report.per_dim_errors[q]) << '\n';
}

inline EvalReport read_errors_csv(const fs::path& path, std::string split = {}, std::string method = {}) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "q,error") throw FormatError(path.string() + ": missing q,error header");
    EvalReport r;
    r.split = std::move(split);
    r.method = std::move(method);
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FormatError(path.string() + ": bad row '" + line + "'");
        r.per_dim_errors.push_back(detail::parse_number<double>("error", line.substr(comma + 1)));
    }
    if (r.per_dim_errors.empty()) throw FormatError(path.string() + ": no rows");
    r.aggregate();
    return r;
}

}  // namespace qfda
