#pragma once

// Fisher discriminant analysis on (optionally quantized) spectra.
//
// Plain scatters:      S_T = X H X^T,  S_W = sum_j X_j H_j X_j^T
// Quantized scatters:  S_T = sym(Q H Q^T + lambda X H Q^T)
//                      S_W = sum_j sym(Q_j H_j Q_j^T + lambda X_j H_j Q_j^T)
// where H is the centering matrix and sym(A) = (A + A^T) / 2. The symmetric
// part leaves every trace tr(U^T S U) unchanged and gives a real spectrum.
//
// Directions solve S_T u = mu (S_W + eps I) u. Both scatters vanish outside
// the span of the centered data, where every eigenvalue is 0, so the problem
// is solved on an orthonormal basis of that span. When S_W + eps I is positive
// definite the Cholesky factor L turns it into the symmetric problem
// L^-1 S_T L^-T and u^T (S_W + eps I) u = 1. With lambda > 0 the quantized
// S_W is in general indefinite; then (S_W + eps I)^-1 S_T is diagonalized
// directly, ranked by real part, and real directions are scaled to
// |u^T (S_W + eps I) u| = 1.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qfda/binary_io.hpp"
#include "qfda/block_dct.hpp"
#include "qfda/errors.hpp"

namespace qfda {

constexpr double kDefaultEpsilon = 1e-7;

enum class ScatterKind { plain, quantized };

struct ScatterPair {
    Eigen::MatrixXd s_t;
    Eigen::MatrixXd s_w;
    double lambda = 0.0;
    ScatterKind kind = ScatterKind::plain;
    // Orthonormal d' x r basis containing the ranges of s_t and s_w.
    // A 0 x 0 matrix means "not known": the whole space is used.
    Eigen::MatrixXd basis;
};

// Columns are directions, eigenvalues descending.
struct Subspace {
    Eigen::MatrixXd u;
    Eigen::VectorXd eigenvalues;
    double epsilon = kDefaultEpsilon;

    Eigen::Index dim() const { return u.rows(); }
    Eigen::Index p() const { return u.cols(); }
};

struct Projection {
    Eigen::MatrixXd coords;  // q x n
    std::vector<int> labels;
};

namespace detail {

inline std::vector<std::vector<Eigen::Index>> members_by_class(const std::vector<int>& labels) {
    int c = 0;
    for (int l : labels) {
        if (l < 0) throw DataError("negative class label");
        c = std::max(c, l + 1);
    }
    std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < labels.size(); ++i)
        members[static_cast<std::size_t>(labels[i])].push_back(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < members.size(); ++j)
        if (members[j].empty()) throw DataError("class " + std::to_string(j) + " has no members");
    return members;
}

// X H: subtract the row mean.
inline Eigen::MatrixXd centered(const Eigen::MatrixXd& x) { return x.colwise() - x.rowwise().mean(); }

// Concatenation of X_j H_j: subtract each column's class mean.
inline Eigen::MatrixXd class_centered(const Eigen::MatrixXd& x,
                                      const std::vector<std::vector<Eigen::Index>>& members) {
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (const auto& idx : members) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(x.rows());
        for (auto i : idx) mean += x.col(i);
        mean /= static_cast<double>(idx.size());
        for (auto i : idx) out.col(i) = x.col(i) - mean;
    }
    return out;
}

inline Eigen::MatrixXd gram(const Eigen::MatrixXd& a) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(a.rows(), a.rows());
    g.selfadjointView<Eigen::Lower>().rankUpdate(a);
    return g.selfadjointView<Eigen::Lower>();
}

inline Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// Orthonormal basis of the column space (rank-revealing QR).
inline Eigen::MatrixXd range_basis(const Eigen::MatrixXd& cols) {
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cols);
    const Eigen::Index r = qr.rank();
    return qr.householderQ() * Eigen::MatrixXd::Identity(cols.rows(), r);
}

// Orthonormal basis of the orthogonal complement of an orthonormal basis.
inline Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& basis) {
    const Eigen::Index d = basis.rows(), r = basis.cols();
    if (r == 0) return Eigen::MatrixXd::Identity(d, d);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    return q.rightCols(d - r);
}

struct EigenPairs {
    Eigen::VectorXd values;  // descending
    Eigen::MatrixXd vectors;
};

inline EigenPairs definite_pairs(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& st) {
    const auto l = llt.matrixL();
    Eigen::MatrixXd c = l.solve(st);
    c = l.solve(c.transpose().eval());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric_part(c));
    if (eig.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
    return {eig.eigenvalues().reverse(), llt.matrixU().solve(eig.eigenvectors().rowwise().reverse().eval())};
}

inline EigenPairs general_pairs(const Eigen::MatrixXd& b, const Eigen::MatrixXd& st) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    // eps is tiny next to the scatter scale, so only exact zero pivots count.
    lu.setThreshold(std::numeric_limits<double>::min());
    if (!lu.isInvertible()) throw NumericError("S_W + eps I is singular");
    const Eigen::MatrixXd m = lu.solve(st);
    if (!m.allFinite()) throw NumericError("S_W + eps I is singular");
    const Eigen::EigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
    const Eigen::VectorXcd mu = eig.eigenvalues();
    const Eigen::MatrixXcd vc = eig.eigenvectors();
    const Eigen::Index r = mu.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
    for (Eigen::Index i = 0; i < r; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto c) { return mu(a).real() > mu(c).real(); });

    EigenPairs out{Eigen::VectorXd(r), Eigen::MatrixXd(r, r)};
    for (Eigen::Index j = 0; j < r; ++j) {
        const auto i = order[static_cast<std::size_t>(j)];
        out.values(j) = mu(i).real();
        // Re and Im of a complex pair span its real invariant plane.
        Eigen::VectorXd v = mu(i).imag() < 0.0 ? Eigen::VectorXd(vc.col(i).imag()) : Eigen::VectorXd(vc.col(i).real());
        const double bn = std::abs(v.dot(b * v));
        if (bn > std::numeric_limits<double>::min()) v /= std::sqrt(bn);
        else v.normalize();
        out.vectors.col(j) = v;
    }
    return out;
}

}  // namespace detail

inline ScatterPair plain_scatters(const SpectrumSet& train) {
    const auto members = detail::members_by_class(train.labels);
    ScatterPair pair;
    pair.kind = ScatterKind::plain;
    const Eigen::MatrixXd xc = detail::centered(train.coeffs);
    pair.s_t = detail::gram(xc);
    pair.s_w = detail::gram(detail::class_centered(train.coeffs, members));
    pair.basis = detail::range_basis(xc);
    return pair;
}

inline ScatterPair quantized_scatters(const SpectrumSet& train, const SpectrumSet& quantized, double lambda) {
    if (train.labels != quantized.labels) throw ConsistencyError("quantized labels differ from training labels");
    if (train.coeffs.rows() != quantized.coeffs.rows() || train.coeffs.cols() != quantized.coeffs.cols())
        throw ConsistencyError("quantized spectra shape differs from training spectra");
    if (!(lambda >= 0.0)) throw ValueError("lambda must be nonnegative");
    const auto members = detail::members_by_class(train.labels);

    const Eigen::MatrixXd qc = detail::centered(quantized.coeffs);
    const Eigen::MatrixXd qw = detail::class_centered(quantized.coeffs, members);
    ScatterPair pair;
    pair.kind = ScatterKind::quantized;
    pair.lambda = lambda;
    pair.s_t = detail::gram(qc);
    pair.s_w = detail::gram(qw);
    if (lambda != 0.0) {
        const Eigen::MatrixXd xc = detail::centered(train.coeffs);
        const Eigen::MatrixXd xw = detail::class_centered(train.coeffs, members);
        pair.s_t += lambda * detail::symmetric_part(xc * qc.transpose());
        pair.s_w += lambda * detail::symmetric_part(xw * qw.transpose());
        Eigen::MatrixXd both(xc.rows(), 2 * xc.cols());
        both << xc, qc;
        pair.basis = detail::range_basis(both);
    } else {
        pair.basis = detail::range_basis(qc);
    }
    return pair;
}

// Flips each column so its largest-magnitude entry (first on ties) is positive.
inline void canonicalize_signs(Eigen::MatrixXd& u) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index arg = 0;
        u.col(j).cwiseAbs().maxCoeff(&arg);
        if (u(arg, j) < 0.0) u.col(j) = -u.col(j);
    }
}

inline Subspace solve_subspace(const ScatterPair& pair, Eigen::Index p, double epsilon = kDefaultEpsilon) {
    const Eigen::Index d = pair.s_t.rows();
    if (pair.s_t.cols() != d || pair.s_w.rows() != d || pair.s_w.cols() != d)
        throw ConsistencyError("scatter matrices must be square and of equal size");
    if (p < 1 || p > d) throw DimensionError("subspace dimension " + std::to_string(p) + " outside [1, d']");
    if (!(epsilon > 0.0)) throw ValueError("epsilon must be positive");
    if (!pair.s_t.allFinite() || !pair.s_w.allFinite()) throw NumericError("non-finite scatter matrix");

    const bool reduced = pair.basis.rows() != 0;
    if (reduced && pair.basis.rows() != d) throw ConsistencyError("scatter basis has the wrong dimension");
    const Eigen::MatrixXd st =
        reduced ? detail::symmetric_part(pair.basis.transpose() * pair.s_t * pair.basis) : pair.s_t;
    Eigen::MatrixXd b = reduced ? detail::symmetric_part(pair.basis.transpose() * pair.s_w * pair.basis) : pair.s_w;
    b.diagonal().array() += epsilon;

    detail::EigenPairs ep;
    if (b.size() > 0) {
        const Eigen::LLT<Eigen::MatrixXd> llt(b);
        ep = llt.info() == Eigen::Success ? detail::definite_pairs(llt, st) : detail::general_pairs(b, st);
    }
    const Eigen::MatrixXd lifted = reduced ? Eigen::MatrixXd(pair.basis * ep.vectors) : ep.vectors;

    // Nonnegative eigenvalues from the span, then the complement (eigenvalue
    // 0, scaled to eps-norm 1), then the negative ones.
    const Eigen::Index r = ep.values.size();
    Eigen::Index nonneg = 0;
    while (nonneg < r && ep.values(nonneg) >= 0.0) ++nonneg;
    Subspace out;
    out.epsilon = epsilon;
    out.u.resize(d, p);
    out.eigenvalues.resize(p);
    Eigen::MatrixXd comp;
    if (p > nonneg && r < d) comp = detail::complement_basis(pair.basis) / std::sqrt(epsilon);
    for (Eigen::Index j = 0, from_span = 0, from_comp = 0; j < p; ++j) {
        if (from_span < nonneg || from_comp == comp.cols()) {
            out.u.col(j) = lifted.col(from_span);
            out.eigenvalues(j) = ep.values(from_span++);
        } else {
            out.u.col(j) = comp.col(from_comp++);
            out.eigenvalues(j) = 0.0;
        }
    }
    canonicalize_signs(out.u);
    return out;
}

inline Projection project(const Subspace& subspace, const SpectrumSet& data, Eigen::Index q) {
    if (q < 1) throw DimensionError("projection needs q >= 1");
    if (q > subspace.p()) throw DimensionError("q = " + std::to_string(q) + " exceeds subspace dimension " +
                                               std::to_string(subspace.p()));
    if (data.dim() != subspace.dim()) throw ConsistencyError("data dimension differs from subspace dimension");
    return {subspace.u.leftCols(q).transpose() * data.coeffs, data.labels};
}

// U coords; with orthonormal U spanning the data this rebuilds the input.
inline Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& u, const Eigen::MatrixXd& coords) { return u * coords; }

// tr(U^T S_T U) / tr(U^T (S_W + eps I) U).
inline double criterion(const ScatterPair& pair, const Eigen::Ref<const Eigen::MatrixXd>& u, double epsilon) {
    const double num = (u.transpose() * pair.s_t * u).trace();
    const double den = (u.transpose() * pair.s_w * u).trace() + epsilon * u.squaredNorm();
    if (!(den > 0.0)) throw NumericError("nonpositive criterion denominator");
    return num / den;
}

inline double criterion(const ScatterPair& pair, const Subspace& subspace, Eigen::Index q) {
    if (q < 1 || q > subspace.p()) throw DimensionError("criterion dimension outside [1, p]");
    return criterion(pair, subspace.u.leftCols(q), subspace.epsilon);
}

constexpr std::uint32_t kSignLargestPositive = 1;

// "QFDASUBS" | u64 d' | u64 p | f64 eps | u32 sign tag | f64[d' p] U
// column-major | f64[p] eigenvalues, little-endian.
inline void save_subspace(const Subspace& s, const fs::path& path) {
    auto out = detail::create_binary(path);
    binary::write_magic(out, "QFDASUBS");
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(s.dim()));
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(s.p()));
    binary::write_le<double>(out, s.epsilon);
    binary::write_le<std::uint32_t>(out, kSignLargestPositive);
    for (Eigen::Index i = 0; i < s.u.size(); ++i) binary::write_le<double>(out, s.u.data()[i]);
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) binary::write_le<double>(out, s.eigenvalues(i));
    if (!out) throw FileError("failed writing " + path.string());
}

inline Subspace load_subspace(const fs::path& path) {
    auto in = detail::open_binary(path);
    binary::expect_magic(in, "QFDASUBS", path.string());
    const auto d = static_cast<Eigen::Index>(binary::read_le<std::uint64_t>(in));
    const auto p = static_cast<Eigen::Index>(binary::read_le<std::uint64_t>(in));
    Subspace s;
    s.epsilon = binary::read_le<double>(in);
    if (binary::read_le<std::uint32_t>(in) != kSignLargestPositive)
        throw FormatError(path.string() + ": unknown sign convention tag");
    s.u.resize(d, p);
    for (Eigen::Index i = 0; i < s.u.size(); ++i) s.u.data()[i] = binary::read_le<double>(in);
    s.eigenvalues.resize(p);
    for (Eigen::Index i = 0; i < p; ++i) s.eigenvalues(i) = binary::read_le<double>(in);
    return s;
}

}  // namespace qfda
