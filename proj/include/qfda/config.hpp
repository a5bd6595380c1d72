#pragma once

// Experiment configuration and its `key = value` text format.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfda/dataset.hpp"
#include "qfda/discriminant.hpp"
#include "qfda/errors.hpp"
#include "qfda/optimizer.hpp"

namespace qfda {

// Shortest round-trip decimal form.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct ExperimentConfig {
    std::string dataset = "idx";  // idx | pgm
    fs::path images;              // idx image file
    fs::path labels;              // idx label file
    fs::path pgm_dir;
    fs::path class_map;           // optional, pgm only
    std::vector<int> classes;     // optional: keep these labels, relabelled 0..c-1 in order

    double resample_factor = 1.0;
    double train_fraction = 0.6;
    double val_fraction = 0.2;
    double test_fraction = 0.2;
    Eigen::Index max_train_samples = 2000;

    std::vector<double> gamma_grid{1.0};
    std::vector<double> lambda_grid{0.5};
    int k_nn = 10;
    int max_dims = 20;
    double epsilon = kDefaultEpsilon;
    Eigen::Index bootstrap_size = 0;  // 0 -> min(100, n_train)

    PsoConfig pso;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> split_seed, bootstrap_seed, pso_seed;

    fs::path output_dir = "qfda_out";
    int threads = 1;

    std::uint64_t effective_split_seed() const { return split_seed.value_or(seed); }
    std::uint64_t effective_bootstrap_seed() const { return bootstrap_seed.value_or(seed + 1); }
    std::uint64_t effective_pso_seed() const { return pso_seed.value_or(seed + 2); }

    Eigen::Index effective_bootstrap_size(Eigen::Index n_train) const {
        return bootstrap_size > 0 ? bootstrap_size : std::min<Eigen::Index>(100, n_train);
    }

    SplitSpec split_spec() const { return {train_fraction, val_fraction, test_fraction, effective_split_seed()}; }

    void validate() const {
        if (dataset != "idx" && dataset != "pgm") throw ConfigError("dataset must be 'idx' or 'pgm'");
        if (gamma_grid.empty() || lambda_grid.empty()) throw ConfigError("gamma and lambda grids must be nonempty");
        for (double g : gamma_grid)
            if (!(g >= 0)) throw ConfigError("gamma values must be nonnegative");
        for (double l : lambda_grid)
            if (!(l >= 0)) throw ConfigError("lambda values must be nonnegative");
        if (k_nn < 1) throw ConfigError("k_nn must be >= 1");
        if (max_dims < 1) throw ConfigError("max_dims must be >= 1");
        if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
        if (max_train_samples < 1) throw ConfigError("max_train_samples must be >= 1");
        if (threads < 1) throw ConfigError("threads must be >= 1");
        split_spec().validate();
        pso.validate();
    }

    // Applies one `key = value` setting.
    void set(const std::string& key, const std::string& value);

    void load_file(const fs::path& path) {
        std::ifstream in(path);
        if (!in) throw FileError("cannot open config " + path.string());
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
            };
            if (trim(line).empty()) continue;
            if (eq == std::string::npos)
                throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
            try {
                set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            } catch (const ConfigError& e) {
                throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
        // Relative data paths are resolved against the config file's directory.
        const auto base = path.parent_path();
        for (auto* p : {&images, &labels, &pgm_dir, &class_map})
            if (!p->empty() && p->is_relative()) *p = base / *p;
    }
};

namespace detail {

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T v{};
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) throw ConfigError("bad value '" + text + "' for " + key);
    return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(parse_number<T>(key, tok.substr(b, e - b + 1)));
    }
    return out;
}

}  // namespace detail

inline void ExperimentConfig::set(const std::string& key, const std::string& value) {
    using detail::parse_list;
    using detail::parse_number;
    if (key == "dataset") dataset = value;
    else if (key == "images") images = value;
    else if (key == "labels") labels = value;
    else if (key == "pgm_dir") pgm_dir = value;
    else if (key == "class_map") class_map = value;
    else if (key == "classes") classes = parse_list<int>(key, value);
    else if (key == "resample_factor") resample_factor = parse_number<double>(key, value);
    else if (key == "train_fraction") train_fraction = parse_number<double>(key, value);
    else if (key == "val_fraction") val_fraction = parse_number<double>(key, value);
    else if (key == "test_fraction") test_fraction = parse_number<double>(key, value);
    else if (key == "max_train_samples") max_train_samples = parse_number<Eigen::Index>(key, value);
    else if (key == "gamma_grid") gamma_grid = parse_list<double>(key, value);
    else if (key == "lambda_grid") lambda_grid = parse_list<double>(key, value);
    else if (key == "k_nn") k_nn = parse_number<int>(key, value);
    else if (key == "max_dims") max_dims = parse_number<int>(key, value);
    else if (key == "epsilon") epsilon = parse_number<double>(key, value);
    else if (key == "bootstrap_size") bootstrap_size = parse_number<Eigen::Index>(key, value);
    else if (key == "particles") pso.particles = parse_number<int>(key, value);
    else if (key == "iterations") pso.iterations = parse_number<int>(key, value);
    else if (key == "inertia") pso.inertia = parse_number<double>(key, value);
    else if (key == "cognitive") pso.cognitive = parse_number<double>(key, value);
    else if (key == "social") pso.social = parse_number<double>(key, value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "split_seed") split_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "bootstrap_seed") bootstrap_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "pso_seed") pso_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "output_dir") output_dir = value;
    else if (key == "threads") threads = parse_number<int>(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

}  // namespace qfda
