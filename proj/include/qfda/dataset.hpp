#pragma once

// Image corpus ingestion: IDX and binary PGM readers/writers, bilinear
// resampling, seeded stratified splitting and mean centering.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qfda/errors.hpp"

namespace qfda {

namespace fs = std::filesystem;

// One column per image, pixels stored row-major (row * width + col).
struct RawImageSet {
    Eigen::MatrixXd pixels;
    int height = 0;
    int width = 0;
    std::vector<int> labels;

    Eigen::Index size() const { return pixels.cols(); }
    Eigen::Index dim() const { return pixels.rows(); }

    int num_classes() const {
        return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    }

    std::vector<Eigen::Index> class_counts() const {
        std::vector<Eigen::Index> counts(static_cast<std::size_t>(num_classes()), 0);
        for (int l : labels) ++counts[static_cast<std::size_t>(l)];
        return counts;
    }

    void validate() const {
        if (static_cast<Eigen::Index>(height) * width != pixels.rows())
            throw ConsistencyError("image set: rows != height*width");
        if (static_cast<Eigen::Index>(labels.size()) != pixels.cols())
            throw ConsistencyError("image set: label count != column count");
        for (int l : labels)
            if (l < 0) throw ConsistencyError("image set: negative label");
        for (auto c : class_counts())
            if (c == 0) throw ConsistencyError("image set: a class in [0, c) has no members");
    }
};

struct SplitSpec {
    double train_fraction = 0.6;
    double val_fraction = 0.2;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;

    void validate() const {
        for (double f : {train_fraction, val_fraction, test_fraction})
            if (!(f > 0.0 && f < 1.0)) throw SplitError("split fractions must lie in (0, 1)");
        if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
            throw SplitError("split fractions must sum to 1");
    }
};

struct SplitIndices {
    std::vector<Eigen::Index> train, val, test;
};

struct Split {
    RawImageSet train, val, test;
    SplitIndices indices;
};

// Pixels with the mean image removed. `mean_image` is kept so the original
// can be rebuilt for display.
struct CenteredImageSet {
    Eigen::MatrixXd pixels;
    Eigen::VectorXd mean_image;
    int height = 0;
    int width = 0;
    std::vector<int> labels;
    std::string provenance;

    Eigen::Index size() const { return pixels.cols(); }

    Eigen::MatrixXd restore() const { return pixels.colwise() + mean_image; }
};

namespace detail {

inline std::uint32_t read_be_u32(std::istream& in, const std::string& what) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4))
        throw FormatError(what + ": truncated header");
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

inline void write_be_u32(std::ostream& out, std::uint32_t v) {
    const std::array<unsigned char, 4> b{static_cast<unsigned char>(v >> 24),
                                         static_cast<unsigned char>(v >> 16),
                                         static_cast<unsigned char>(v >> 8),
                                         static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

inline std::ifstream open_binary(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path.string());
    return in;
}

inline std::ofstream create_binary(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + path.string());
    return out;
}

// Next whitespace-delimited PGM header token, skipping '#' comments.
inline std::string pgm_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {}
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

inline int parse_header_int(const std::string& tok, const fs::path& path) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw FormatError(path.string() + ": bad PGM header field '" + tok + "'");
    }
}

}  // namespace detail

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

// Reads an IDX image file (magic 0x803, unsigned bytes) and its label file.
inline RawImageSet load_idx(const fs::path& images_path, const fs::path& labels_path) {
    auto in = detail::open_binary(images_path);
    if (detail::read_be_u32(in, images_path.string()) != kIdxImageMagic)
        throw FormatError(images_path.string() + ": not an IDX image file (magic != 0x00000803)");
    const auto count = detail::read_be_u32(in, images_path.string());
    const auto rows = detail::read_be_u32(in, images_path.string());
    const auto cols = detail::read_be_u32(in, images_path.string());

    auto lin = detail::open_binary(labels_path);
    if (detail::read_be_u32(lin, labels_path.string()) != kIdxLabelMagic)
        throw FormatError(labels_path.string() + ": not an IDX label file (magic != 0x00000801)");
    const auto label_count = detail::read_be_u32(lin, labels_path.string());
    if (label_count != count)
        throw ConsistencyError("IDX image count " + std::to_string(count) +
                               " != label count " + std::to_string(label_count));

    RawImageSet set;
    set.height = static_cast<int>(rows);
    set.width = static_cast<int>(cols);
    const Eigen::Index d = static_cast<Eigen::Index>(rows) * cols;
    set.pixels.resize(d, count);
    std::vector<unsigned char> buf(static_cast<std::size_t>(d));
    for (std::uint32_t i = 0; i < count; ++i) {
        if (!in.read(reinterpret_cast<char*>(buf.data()), d))
            throw FormatError(images_path.string() + ": truncated pixel data");
        for (Eigen::Index r = 0; r < d; ++r) set.pixels(r, i) = buf[static_cast<std::size_t>(r)];
    }
    std::vector<unsigned char> lbuf(count);
    if (!lin.read(reinterpret_cast<char*>(lbuf.data()), count))
        throw FormatError(labels_path.string() + ": truncated label data");
    set.labels.assign(lbuf.begin(), lbuf.end());
    set.validate();
    return set;
}

inline unsigned char to_byte(double v) {
    return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
}

// Pixels are rounded and clamped to [0, 255].
inline void write_idx(const RawImageSet& set, const fs::path& images_path,
                      const fs::path& labels_path) {
    auto out = detail::create_binary(images_path);
    detail::write_be_u32(out, kIdxImageMagic);
    detail::write_be_u32(out, static_cast<std::uint32_t>(set.size()));
    detail::write_be_u32(out, static_cast<std::uint32_t>(set.height));
    detail::write_be_u32(out, static_cast<std::uint32_t>(set.width));
    for (Eigen::Index i = 0; i < set.size(); ++i)
        for (Eigen::Index r = 0; r < set.dim(); ++r) out.put(static_cast<char>(to_byte(set.pixels(r, i))));
    auto lout = detail::create_binary(labels_path);
    detail::write_be_u32(lout, kIdxLabelMagic);
    detail::write_be_u32(lout, static_cast<std::uint32_t>(set.labels.size()));
    for (int l : set.labels) lout.put(static_cast<char>(l));
    if (!out || !lout) throw FileError("failed writing IDX files");
}

struct PgmImage {
    int height = 0;
    int width = 0;
    std::vector<unsigned char> pixels;  // row-major
};

inline PgmImage read_pgm(const fs::path& path) {
    auto in = detail::open_binary(path);
    if (detail::pgm_token(in) != "P5") throw FormatError(path.string() + ": not a binary PGM (P5)");
    PgmImage img;
    img.width = detail::parse_header_int(detail::pgm_token(in), path);
    img.height = detail::parse_header_int(detail::pgm_token(in), path);
    const int maxval = detail::parse_header_int(detail::pgm_token(in), path);
    if (maxval > 255) throw FormatError(path.string() + ": 16-bit PGM not supported");
    img.pixels.resize(static_cast<std::size_t>(img.height) * img.width);
    if (!in.read(reinterpret_cast<char*>(img.pixels.data()),
                 static_cast<std::streamsize>(img.pixels.size())))
        throw FormatError(path.string() + ": truncated PGM payload");
    return img;
}

inline void write_pgm(const fs::path& path, const PgmImage& img) {
    auto out = detail::create_binary(path);
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw FileError("failed writing " + path.string());
}

// Row-major pixel vector to PGM, rounding and clamping to [0, 255].
inline PgmImage to_pgm(const Eigen::Ref<const Eigen::VectorXd>& column, int height, int width) {
    PgmImage img{height, width, std::vector<unsigned char>(static_cast<std::size_t>(height) * width)};
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        img.pixels[i] = to_byte(column(static_cast<Eigen::Index>(i)));
    return img;
}

// Maps a class subdirectory name to a label. Lines are `name label`; '#'
// starts a comment. Subdirectories absent from the map are skipped.
using ClassMap = std::map<std::string, int>;

inline ClassMap read_class_map(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open class map " + path.string());
    ClassMap map;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string name;
        int label;
        if (!(ss >> name)) continue;
        if (!(ss >> label) || label < 0)
            throw FormatError("class map " + path.string() + ": bad line '" + line + "'");
        map[name] = label;
    }
    return map;
}

// Loads a directory with one subdirectory of P5 images per class. Without a
// class map, subdirectories are labelled 0..c-1 in name order. Images are
// ordered by (class, filename).
inline RawImageSet load_pgm_dir(const fs::path& root, const ClassMap* class_map = nullptr) {
    if (!fs::is_directory(root)) throw FileError(root.string() + " is not a directory");
    std::vector<fs::path> class_dirs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) class_dirs.push_back(e.path());
    std::sort(class_dirs.begin(), class_dirs.end());

    std::vector<std::pair<int, fs::path>> files;
    for (std::size_t ci = 0; ci < class_dirs.size(); ++ci) {
        int label = static_cast<int>(ci);
        if (class_map) {
            auto it = class_map->find(class_dirs[ci].filename().string());
            if (it == class_map->end()) continue;
            label = it->second;
        }
        std::vector<fs::path> in_class;
        for (const auto& e : fs::directory_iterator(class_dirs[ci]))
            if (e.is_regular_file() && e.path().extension() == ".pgm") in_class.push_back(e.path());
        std::sort(in_class.begin(), in_class.end());
        for (auto& p : in_class) files.emplace_back(label, std::move(p));
    }
    if (files.empty()) throw ConsistencyError(root.string() + ": no PGM images found");
    std::stable_sort(files.begin(), files.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    RawImageSet set;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto img = read_pgm(files[i].second);
        if (i == 0) {
            set.height = img.height;
            set.width = img.width;
            set.pixels.resize(static_cast<Eigen::Index>(img.height) * img.width,
                              static_cast<Eigen::Index>(files.size()));
        } else if (img.height != set.height || img.width != set.width) {
            throw ConsistencyError(files[i].second.string() + ": dimensions differ from " +
                                   std::to_string(set.height) + "x" + std::to_string(set.width));
        }
        for (std::size_t r = 0; r < img.pixels.size(); ++r)
            set.pixels(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = img.pixels[r];
        set.labels.push_back(files[i].first);
    }
    set.validate();
    return set;
}

// Bilinear resampling with pixel-center alignment. Output size is
// round(factor * height) x round(factor * width).
inline RawImageSet resample(const RawImageSet& set, double factor) {
    if (!(factor > 0.0 && factor <= 1.0)) throw ValueError("resample factor must be in (0, 1]");
    const int nh = static_cast<int>(std::lround(factor * set.height));
    const int nw = static_cast<int>(std::lround(factor * set.width));
    if (nh < 8 || nw < 8)
        throw SizeError("resampled image " + std::to_string(nh) + "x" + std::to_string(nw) +
                        " is smaller than one 8x8 block");
    if (nh == set.height && nw == set.width) return set;

    struct Tap {
        int lo, hi;
        double w;
    };
    auto taps = [](int out_n, int in_n) {
        std::vector<Tap> t(static_cast<std::size_t>(out_n));
        const double scale = static_cast<double>(in_n) / out_n;
        for (int i = 0; i < out_n; ++i) {
            const double src = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(in_n - 1));
            const int lo = static_cast<int>(std::floor(src));
            t[static_cast<std::size_t>(i)] = {lo, std::min(lo + 1, in_n - 1), src - lo};
        }
        return t;
    };
    const auto ty = taps(nh, set.height);
    const auto tx = taps(nw, set.width);

    RawImageSet out;
    out.height = nh;
    out.width = nw;
    out.labels = set.labels;
    out.pixels.resize(static_cast<Eigen::Index>(nh) * nw, set.size());
    for (Eigen::Index c = 0; c < set.size(); ++c) {
        const auto src = set.pixels.col(c);
        auto at = [&](int r, int q) { return src(static_cast<Eigen::Index>(r) * set.width + q); };
        for (int r = 0; r < nh; ++r) {
            const auto& y = ty[static_cast<std::size_t>(r)];
            for (int q = 0; q < nw; ++q) {
                const auto& x = tx[static_cast<std::size_t>(q)];
                const double top = at(y.lo, x.lo) * (1.0 - x.w) + at(y.lo, x.hi) * x.w;
                const double bot = at(y.hi, x.lo) * (1.0 - x.w) + at(y.hi, x.hi) * x.w;
                out.pixels(static_cast<Eigen::Index>(r) * nw + q, c) = top * (1.0 - y.w) + bot * y.w;
            }
        }
    }
    return out;
}

inline RawImageSet subset(const RawImageSet& set, const std::vector<Eigen::Index>& idx) {
    RawImageSet out;
    out.height = set.height;
    out.width = set.width;
    out.pixels.resize(set.dim(), static_cast<Eigen::Index>(idx.size()));
    out.labels.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.pixels.col(static_cast<Eigen::Index>(i)) = set.pixels.col(idx[i]);
        out.labels.push_back(set.labels[static_cast<std::size_t>(idx[i])]);
    }
    return out;
}

namespace detail {

inline std::vector<std::vector<Eigen::Index>> shuffled_classes(const std::vector<int>& labels,
                                                               std::uint64_t seed) {
    int c = 0;
    for (int l : labels) c = std::max(c, l + 1);
    std::vector<std::vector<Eigen::Index>> by_class(static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[static_cast<std::size_t>(labels[i])].push_back(static_cast<Eigen::Index>(i));
    std::mt19937_64 rng(seed);
    for (auto& members : by_class) std::shuffle(members.begin(), members.end(), rng);
    return by_class;
}

}  // namespace detail

// Per-class seeded shuffle, then proportional cut. Every class contributes at
// least one sample to each split.
inline SplitIndices split_indices(const RawImageSet& set, const SplitSpec& spec) {
    spec.validate();
    SplitIndices out;
    for (const auto& members : detail::shuffled_classes(set.labels, spec.seed)) {
        const auto n = static_cast<Eigen::Index>(members.size());
        if (n < 3) throw SplitError("class with " + std::to_string(n) + " members cannot be split three ways");
        Eigen::Index n_train = std::lround(spec.train_fraction * static_cast<double>(n));
        Eigen::Index n_val = std::lround(spec.val_fraction * static_cast<double>(n));
        n_train = std::clamp<Eigen::Index>(n_train, 1, n - 2);
        n_val = std::clamp<Eigen::Index>(n_val, 1, n - n_train - 1);
        auto first = members.begin();
        out.train.insert(out.train.end(), first, first + n_train);
        out.val.insert(out.val.end(), first + n_train, first + n_train + n_val);
        out.test.insert(out.test.end(), first + n_train + n_val, members.end());
    }
    for (auto* v : {&out.train, &out.val, &out.test}) std::sort(v->begin(), v->end());
    return out;
}

inline Split stratified_split(const RawImageSet& set, const SplitSpec& spec) {
    Split s;
    s.indices = split_indices(set, spec);
    s.train = subset(set, s.indices.train);
    s.val = subset(set, s.indices.val);
    s.test = subset(set, s.indices.test);
    return s;
}

// Positions of at most `max_count` labels, kept proportionally per class (at
// least one per class) by a seeded shuffle, ascending.
inline std::vector<Eigen::Index> stratified_subsample_indices(const std::vector<int>& labels,
                                                              Eigen::Index max_count, std::uint64_t seed) {
    const auto n_all = static_cast<Eigen::Index>(labels.size());
    std::vector<Eigen::Index> keep;
    if (n_all <= max_count) {
        keep.resize(labels.size());
        std::iota(keep.begin(), keep.end(), Eigen::Index{0});
        return keep;
    }
    const double frac = static_cast<double>(max_count) / static_cast<double>(n_all);
    for (const auto& members : detail::shuffled_classes(labels, seed)) {
        const auto n = static_cast<Eigen::Index>(members.size());
        if (n == 0) continue;
        const auto take = std::clamp<Eigen::Index>(std::lround(frac * static_cast<double>(n)), 1, n);
        keep.insert(keep.end(), members.begin(), members.begin() + take);
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

inline RawImageSet stratified_subsample(const RawImageSet& set, Eigen::Index max_count, std::uint64_t seed) {
    return subset(set, stratified_subsample_indices(set.labels, max_count, seed));
}

inline void write_index_list(const fs::path& path, const std::vector<Eigen::Index>& idx) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FileError("cannot write " + path.string());
    for (auto i : idx) out << i << '\n';
}

inline std::vector<Eigen::Index> read_index_list(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open " + path.string());
    std::vector<Eigen::Index> idx;
    long long v;
    while (in >> v) idx.push_back(static_cast<Eigen::Index>(v));
    if (!in.eof()) throw FormatError(path.string() + ": non-integer entry");
    return idx;
}

// Subtracts a given mean image (the training mean, for val/test).
inline CenteredImageSet center_with(const RawImageSet& set, const Eigen::VectorXd& mean_image,
                                    std::string provenance = {}) {
    if (mean_image.size() != set.dim()) throw ConsistencyError("mean image size != image dimension");
    CenteredImageSet out;
    out.pixels = set.pixels.colwise() - mean_image;
    out.mean_image = mean_image;
    out.height = set.height;
    out.width = set.width;
    out.labels = set.labels;
    out.provenance = std::move(provenance);
    return out;
}

inline CenteredImageSet center(const RawImageSet& set, std::string provenance = {}) {
    if (set.size() < 1) throw DataError("cannot center an empty set");
    return center_with(set, set.pixels.rowwise().mean(), std::move(provenance));
}

}  // namespace qfda
