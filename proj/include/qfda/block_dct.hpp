#pragma once

// 8x8 block DCT-II over zero-padded images.
//
// Block coefficients use the JPEG scaling
//   F(a, b) = 1/4 c(a) c(b) sum_x sum_y f(x, y) cos((2x+1) a pi/16) cos((2y+1) b pi/16)
// with c(0) = 1/sqrt(2) and c(k) = 1 otherwise, which makes the 8x8 basis
// orthonormal. A feature vector is the concatenation of the 64-coefficient
// blocks; blocks are taken row-major across the image and each block is
// flattened row-major (k = 8*alpha + beta). Content sits at the top-left of
// the padded canvas with zeros to the bottom and right.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qfda/binary_io.hpp"
#include "qfda/dataset.hpp"
#include "qfda/errors.hpp"

namespace qfda {

constexpr int kBlock = 8;
constexpr int kFrequencies = 64;

struct BlockLayout {
    int height = 0;
    int width = 0;
    int padded_height = 0;
    int padded_width = 0;

    static BlockLayout for_image(int height, int width) {
        if (height < 1 || width < 1) throw SizeError("image dimensions must be positive");
        auto up = [](int v) { return (v + kBlock - 1) / kBlock * kBlock; };
        return {height, width, up(height), up(width)};
    }

    int blocks_down() const { return padded_height / kBlock; }
    int blocks_across() const { return padded_width / kBlock; }
    int blocks_per_image() const { return blocks_down() * blocks_across(); }
    Eigen::Index d_prime() const { return static_cast<Eigen::Index>(padded_height) * padded_width; }
    Eigen::Index pixel_dim() const { return static_cast<Eigen::Index>(height) * width; }

    bool operator==(const BlockLayout&) const = default;
};

struct SpectrumSet {
    Eigen::MatrixXd coeffs;  // d' x n
    BlockLayout layout;
    std::vector<int> labels;

    Eigen::Index size() const { return coeffs.cols(); }
    Eigen::Index dim() const { return coeffs.rows(); }
    int num_classes() const {
        int c = 0;
        for (int l : labels) c = std::max(c, l + 1);
        return c;
    }
};

using BlockMatrix = Eigen::Matrix<double, kBlock, kBlock, Eigen::RowMajor>;

// Row alpha holds 1/2 c(alpha) cos((2x+1) alpha pi / 16); orthonormal.
inline const BlockMatrix& dct_basis() {
    static const BlockMatrix basis = [] {
        BlockMatrix c;
        for (int a = 0; a < kBlock; ++a)
            for (int x = 0; x < kBlock; ++x)
                c(a, x) = 0.5 * (a == 0 ? 1.0 / std::numbers::sqrt2 : 1.0) *
                          std::cos((2 * x + 1) * a * std::numbers::pi / 16.0);
        return c;
    }();
    return basis;
}

inline BlockMatrix forward_block(const BlockMatrix& f) {
    const auto& c = dct_basis();
    return c * f * c.transpose();
}

inline BlockMatrix inverse_block(const BlockMatrix& coeffs) {
    const auto& c = dct_basis();
    return c.transpose() * coeffs * c;
}

// Transforms pixel columns (row-major images of the layout's original size).
inline Eigen::MatrixXd forward_dct_pixels(const Eigen::Ref<const Eigen::MatrixXd>& pixels,
                                          const BlockLayout& layout) {
    if (pixels.rows() != layout.pixel_dim()) throw ConsistencyError("pixel rows != height*width");
    Eigen::MatrixXd out(layout.d_prime(), pixels.cols());
    for (Eigen::Index n = 0; n < pixels.cols(); ++n) {
        const auto img = pixels.col(n);
        int block = 0;
        for (int by = 0; by < layout.blocks_down(); ++by) {
            for (int bx = 0; bx < layout.blocks_across(); ++bx, ++block) {
                BlockMatrix f = BlockMatrix::Zero();
                for (int y = 0; y < kBlock; ++y) {
                    const int r = by * kBlock + y;
                    if (r >= layout.height) break;
                    for (int x = 0; x < kBlock; ++x) {
                        const int q = bx * kBlock + x;
                        if (q >= layout.width) break;
                        f(y, x) = img(static_cast<Eigen::Index>(r) * layout.width + q);
                    }
                }
                const BlockMatrix coeffs = forward_block(f);
                out.col(n).segment<kFrequencies>(static_cast<Eigen::Index>(block) * kFrequencies) =
                    Eigen::Map<const Eigen::Matrix<double, kFrequencies, 1>>(coeffs.data());
            }
        }
    }
    return out;
}

// Inverse transform, cropped back to the original height x width.
inline Eigen::MatrixXd inverse_dct_pixels(const Eigen::Ref<const Eigen::MatrixXd>& coeffs,
                                          const BlockLayout& layout) {
    if (coeffs.rows() != layout.d_prime()) throw ConsistencyError("spectrum rows != layout d'");
    Eigen::MatrixXd out(layout.pixel_dim(), coeffs.cols());
    for (Eigen::Index n = 0; n < coeffs.cols(); ++n) {
        int block = 0;
        for (int by = 0; by < layout.blocks_down(); ++by) {
            for (int bx = 0; bx < layout.blocks_across(); ++bx, ++block) {
                BlockMatrix c;
                Eigen::Map<Eigen::Matrix<double, kFrequencies, 1>>(c.data()) =
                    coeffs.col(n).segment<kFrequencies>(static_cast<Eigen::Index>(block) * kFrequencies);
                const BlockMatrix f = inverse_block(c);
                for (int y = 0; y < kBlock; ++y) {
                    const int r = by * kBlock + y;
                    if (r >= layout.height) break;
                    for (int x = 0; x < kBlock; ++x) {
                        const int q = bx * kBlock + x;
                        if (q >= layout.width) break;
                        out(static_cast<Eigen::Index>(r) * layout.width + q, n) = f(y, x);
                    }
                }
            }
        }
    }
    return out;
}

inline SpectrumSet forward_dct(const CenteredImageSet& set) {
    SpectrumSet out;
    out.layout = BlockLayout::for_image(set.height, set.width);
    out.coeffs = forward_dct_pixels(set.pixels, out.layout);
    out.labels = set.labels;
    return out;
}

// The returned set carries a zero mean image; add the training mean back
// for display.
inline CenteredImageSet inverse_dct(const SpectrumSet& spectrum) {
    CenteredImageSet out;
    out.pixels = inverse_dct_pixels(spectrum.coeffs, spectrum.layout);
    out.mean_image = Eigen::VectorXd::Zero(spectrum.layout.pixel_dim());
    out.height = spectrum.layout.height;
    out.width = spectrum.layout.width;
    out.labels = spectrum.labels;
    out.provenance = "inverse_dct";
    return out;
}

// Every block's coefficient k, image-major then block-major.
inline Eigen::VectorXd frequency_view(const SpectrumSet& set, int k) {
    if (k < 0 || k >= kFrequencies) throw IndexError("frequency index " + std::to_string(k) + " outside [0, 63]");
    const int blocks = set.layout.blocks_per_image();
    Eigen::VectorXd out(set.size() * blocks);
    Eigen::Index i = 0;
    for (Eigen::Index n = 0; n < set.size(); ++n)
        for (int b = 0; b < blocks; ++b) out(i++) = set.coeffs(static_cast<Eigen::Index>(b) * kFrequencies + k, n);
    return out;
}

// Same, restricted to the listed image columns (repeats allowed).
inline Eigen::VectorXd frequency_view(const SpectrumSet& set, int k, const std::vector<Eigen::Index>& images) {
    if (k < 0 || k >= kFrequencies) throw IndexError("frequency index " + std::to_string(k) + " outside [0, 63]");
    const int blocks = set.layout.blocks_per_image();
    Eigen::VectorXd out(static_cast<Eigen::Index>(images.size()) * blocks);
    Eigen::Index i = 0;
    for (auto n : images)
        for (int b = 0; b < blocks; ++b) out(i++) = set.coeffs(static_cast<Eigen::Index>(b) * kFrequencies + k, n);
    return out;
}

// Binary layout, all little-endian:
//   "QFDASPEC" | u64 d' | u64 n | i32 height | i32 width | i32 padded_height
//   | i32 padded_width | f64[d' * n] column-major | i32[n] labels
inline void save_spectrum(const SpectrumSet& set, const fs::path& path) {
    auto out = detail::create_binary(path);
    binary::write_magic(out, "QFDASPEC");
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(set.dim()));
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(set.size()));
    for (int v : {set.layout.height, set.layout.width, set.layout.padded_height, set.layout.padded_width})
        binary::write_le<std::int32_t>(out, v);
    for (Eigen::Index i = 0; i < set.coeffs.size(); ++i) binary::write_le<double>(out, set.coeffs.data()[i]);
    for (int l : set.labels) binary::write_le<std::int32_t>(out, l);
    if (!out) throw FileError("failed writing " + path.string());
}

inline SpectrumSet load_spectrum(const fs::path& path) {
    auto in = detail::open_binary(path);
    binary::expect_magic(in, "QFDASPEC", path.string());
    SpectrumSet set;
    const auto d = static_cast<Eigen::Index>(binary::read_le<std::uint64_t>(in));
    const auto n = static_cast<Eigen::Index>(binary::read_le<std::uint64_t>(in));
    set.layout.height = binary::read_le<std::int32_t>(in);
    set.layout.width = binary::read_le<std::int32_t>(in);
    set.layout.padded_height = binary::read_le<std::int32_t>(in);
    set.layout.padded_width = binary::read_le<std::int32_t>(in);
    if (set.layout != BlockLayout::for_image(set.layout.height, set.layout.width) || d != set.layout.d_prime())
        throw FormatError(path.string() + ": inconsistent layout header");
    set.coeffs.resize(d, n);
    for (Eigen::Index i = 0; i < set.coeffs.size(); ++i) set.coeffs.data()[i] = binary::read_le<double>(in);
    set.labels.resize(static_cast<std::size_t>(n));
    for (auto& l : set.labels) l = binary::read_le<std::int32_t>(in);
    return set;
}

}  // namespace qfda
