#pragma once

// End-to-end FDA vs QFDA protocol: ingest, split, transform, optimize the
// level vector per (gamma, lambda) cell, pick the cell by validation error,
// evaluate with k-NN and export reports and images.

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qfda/block_dct.hpp"
#include "qfda/config.hpp"
#include "qfda/dataset.hpp"
#include "qfda/discriminant.hpp"
#include "qfda/errors.hpp"
#include "qfda/evaluation.hpp"
#include "qfda/optimizer.hpp"
#include "qfda/quantizer.hpp"
#include "qfda/rate_model.hpp"

namespace qfda {

inline const std::array<std::string, 3> kSplitNames{"train", "val", "test"};

struct PreparedData {
    SpectrumSet train, val, test;
    Eigen::VectorXd mean_image;
    SplitIndices indices;  // into the loaded (and resampled) corpus
    BoundVector bounds;
    FrequencyDensity density;

    const SpectrumSet& split(const std::string& name) const {
        if (name == "train") return train;
        if (name == "val") return val;
        if (name == "test") return test;
        throw ValueError("unknown split '" + name + "'");
    }
};

inline RawImageSet load_corpus(const ExperimentConfig& cfg) {
    RawImageSet set;
    if (cfg.dataset == "idx") {
        set = load_idx(cfg.images, cfg.labels);
    } else {
        if (cfg.class_map.empty()) {
            set = load_pgm_dir(cfg.pgm_dir);
        } else {
            const auto map = read_class_map(cfg.class_map);
            set = load_pgm_dir(cfg.pgm_dir, &map);
        }
    }
    if (!cfg.classes.empty()) {
        std::vector<Eigen::Index> keep;
        std::vector<int> relabel;
        for (Eigen::Index i = 0; i < set.size(); ++i) {
            const auto it = std::find(cfg.classes.begin(), cfg.classes.end(), set.labels[static_cast<std::size_t>(i)]);
            if (it == cfg.classes.end()) continue;
            keep.push_back(i);
            relabel.push_back(static_cast<int>(it - cfg.classes.begin()));
        }
        set = subset(set, keep);
        set.labels = relabel;
        set.validate();
    }
    if (cfg.resample_factor != 1.0) set = resample(set, cfg.resample_factor);
    return set;
}

// Bounds and densities share one bootstrap draw of the training spectra.
inline void fit_rate_statistics(PreparedData& data, const ExperimentConfig& cfg) {
    const auto s = cfg.effective_bootstrap_size(data.train.size());
    data.bounds = estimate_bounds(data.train, s, cfg.effective_bootstrap_seed());
    data.density = fit_density(data.train, s, cfg.effective_bootstrap_seed());
}

inline PreparedData prepare(const ExperimentConfig& cfg) {
    cfg.validate();
    const RawImageSet corpus = load_corpus(cfg);
    Split split = stratified_split(corpus, cfg.split_spec());
    if (split.train.size() > cfg.max_train_samples) {
        std::vector<Eigen::Index> idx;
        for (auto i : stratified_subsample_indices(split.train.labels, cfg.max_train_samples, cfg.effective_split_seed()))
            idx.push_back(split.indices.train[static_cast<std::size_t>(i)]);
        split.indices.train = idx;
        split.train = subset(corpus, idx);
    }

    PreparedData data;
    data.indices = split.indices;
    const CenteredImageSet train = center(split.train, "train");
    data.mean_image = train.mean_image;
    data.train = forward_dct(train);
    data.val = forward_dct(center_with(split.val, data.mean_image, "val"));
    data.test = forward_dct(center_with(split.test, data.mean_image, "test"));
    fit_rate_statistics(data, cfg);
    return data;
}

inline void save_vector(const Eigen::VectorXd& v, const fs::path& path) {
    auto out = detail::create_binary(path);
    binary::write_magic(out, "QFDAVECT");
    binary::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) binary::write_le<double>(out, v(i));
}

inline Eigen::VectorXd load_vector(const fs::path& path) {
    auto in = detail::open_binary(path);
    binary::expect_magic(in, "QFDAVECT", path.string());
    Eigen::VectorXd v(static_cast<Eigen::Index>(binary::read_le<std::uint64_t>(in)));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = binary::read_le<double>(in);
    return v;
}

// <dir>/{train,val,test}.spec, mean_image.bin, split_*.txt.
inline void save_prepared(const PreparedData& data, const fs::path& dir) {
    fs::create_directories(dir);
    save_spectrum(data.train, dir / "train.spec");
    save_spectrum(data.val, dir / "val.spec");
    save_spectrum(data.test, dir / "test.spec");
    save_vector(data.mean_image, dir / "mean_image.bin");
    write_index_list(dir / "split_train.txt", data.indices.train);
    write_index_list(dir / "split_val.txt", data.indices.val);
    write_index_list(dir / "split_test.txt", data.indices.test);
}

inline PreparedData load_prepared(const fs::path& dir, const ExperimentConfig& cfg) {
    PreparedData data;
    data.train = load_spectrum(dir / "train.spec");
    data.val = load_spectrum(dir / "val.spec");
    data.test = load_spectrum(dir / "test.spec");
    data.mean_image = load_vector(dir / "mean_image.bin");
    data.indices.train = read_index_list(dir / "split_train.txt");
    data.indices.val = read_index_list(dir / "split_val.txt");
    data.indices.test = read_index_list(dir / "split_test.txt");
    fit_rate_statistics(data, cfg);
    return data;
}

inline Eigen::Index subspace_dims(const ExperimentConfig& cfg, const SpectrumSet& train) {
    return std::min<Eigen::Index>(cfg.max_dims, train.dim());
}

// ---------------------------------------------------------------- baseline

struct BaselineResult {
    Subspace subspace;
    std::array<EvalReport, 3> reports;  // train, val, test
};

inline Subspace fit_fda(const PreparedData& data, const ExperimentConfig& cfg) {
    return solve_subspace(plain_scatters(data.train), subspace_dims(cfg, data.train), cfg.epsilon);
}

inline std::array<EvalReport, 3> evaluate_all_splits(const Subspace& s, const PreparedData& data,
                                                     const ExperimentConfig& cfg, const std::string& method) {
    std::array<EvalReport, 3> out;
    for (std::size_t i = 0; i < 3; ++i)
        out[i] = evaluate_subspace(s, data.train, data.split(kSplitNames[i]), cfg.k_nn, cfg.max_dims, kSplitNames[i], method);
    return out;
}

inline BaselineResult run_baseline_fda(const PreparedData& data, const ExperimentConfig& cfg) {
    BaselineResult r;
    r.subspace = fit_fda(data, cfg);
    r.reports = evaluate_all_splits(r.subspace, data, cfg, "fda");
    return r;
}

// ------------------------------------------------------------------ QFDA

struct QfdaModel {
    BoundVector bounds;
    LevelVector levels;
    double epsilon = kDefaultEpsilon;
    double gamma = 0.0;
    double lambda = 0.0;
    CostBreakdown cost;
    BlockLayout layout;
    Subspace subspace;
};

struct CellResult {
    double gamma = 0.0;
    double lambda = 0.0;
    PsoResult pso;
    QfdaModel model;
    EvalReport val_report;
    std::size_t evaluations = 0;
};

inline std::string cell_name(double gamma, double lambda) {
    return "gamma_" + format_double(gamma) + "_lambda_" + format_double(lambda);
}

inline ObjectiveParams objective_params(const ExperimentConfig& cfg, double gamma, double lambda, const SpectrumSet& train) {
    return {gamma, lambda, cfg.epsilon, subspace_dims(cfg, train)};
}

// PSO for one (gamma, lambda), then the subspace at the best level vector.
inline CellResult optimize_cell(const PreparedData& data, const ExperimentConfig& cfg, double gamma, double lambda,
                                int threads = 1) {
    QfdaObjective objective(data.train, data.bounds, data.density, objective_params(cfg, gamma, lambda, data.train));
    PsoConfig pso = cfg.pso;
    pso.seed = cfg.effective_pso_seed();
    pso.gamma = gamma;
    pso.lambda = lambda;

    CellResult cell;
    cell.gamma = gamma;
    cell.lambda = lambda;
    cell.pso = run_pso(data.bounds, pso, objective, threads);
    cell.evaluations = objective.full_evaluations();

    auto& m = cell.model;
    m.bounds = data.bounds;
    m.levels = cell.pso.best;
    m.epsilon = cfg.epsilon;
    m.gamma = gamma;
    m.lambda = lambda;
    m.cost = cell.pso.breakdown;
    m.layout = data.train.layout;
    m.subspace = objective.solve(cell.pso.best, subspace_dims(cfg, data.train)).subspace;
    cell.val_report = evaluate_subspace(m.subspace, data.train, data.val, cfg.k_nn, cfg.max_dims, "val", "qfda");
    return cell;
}

// "k,m_k" rows.
inline void write_levels_csv(const LevelVector& levels, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FileError("cannot write " + path.string());
    out << "k,m_k\n";
    for (int k = 0; k < kFrequencies; ++k) out << k << ',' << levels.m[static_cast<std::size_t>(k)] << '\n';
}

inline LevelVector read_levels_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "k,m_k") throw FormatError(path.string() + ": missing k,m_k header");
    LevelVector v;
    int k = 0;
    while (std::getline(in, line) && k < kFrequencies) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FormatError(path.string() + ": bad row");
        v.m[static_cast<std::size_t>(k++)] = detail::parse_number<int>("m_k", line.substr(comma + 1));
    }
    if (k != kFrequencies) throw FormatError(path.string() + ": expected 64 rows");
    return v;
}

// model.json holds the scalar settings and the bound/level vectors as
// 64-integer CSV lines; U lives next to it in the referenced binary file.
inline void save_model(const QfdaModel& model, const fs::path& dir, const std::string& subspace_file = "subspace.bin") {
    fs::create_directories(dir);
    save_subspace(model.subspace, dir / subspace_file);
    nlohmann::ordered_json j;
    j["format"] = "qfda-model";
    j["version"] = 1;
    j["layout"] = {{"height", model.layout.height},
                   {"width", model.layout.width},
                   {"padded_height", model.layout.padded_height},
                   {"padded_width", model.layout.padded_width},
                   {"d_prime", model.layout.d_prime()}};
    j["epsilon"] = model.epsilon;
    j["gamma"] = model.gamma;
    j["lambda"] = model.lambda;
    j["bounds"] = to_csv_line(model.bounds.ell);
    j["levels"] = to_csv_line(model.levels.m);
    j["bootstrap"] = {{"size", model.bounds.bootstrap_size}, {"seed", model.bounds.bootstrap_seed}};
    j["cost"] = {{"criterion", model.cost.criterion}, {"rate", model.cost.rate}, {"total", model.cost.total}};
    j["subspace"] = {{"file", subspace_file}, {"p", model.subspace.p()}, {"sign_convention", "largest-magnitude-positive"}};
    std::vector<double> eig(model.subspace.eigenvalues.data(), model.subspace.eigenvalues.data() + model.subspace.eigenvalues.size());
    j["eigenvalues"] = eig;
    std::ofstream out(dir / "model.json", std::ios::trunc);
    if (!out) throw FileError("cannot write " + (dir / "model.json").string());
    out << j.dump(2) << '\n';
}

inline QfdaModel load_model(const fs::path& dir) {
    std::ifstream in(dir / "model.json");
    if (!in) throw FileError("cannot open " + (dir / "model.json").string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        if (j.at("format") != "qfda-model") throw FormatError("not a qfda model file");
        QfdaModel m;
        m.layout = BlockLayout::for_image(j.at("layout").at("height"), j.at("layout").at("width"));
        m.epsilon = j.at("epsilon");
        m.gamma = j.at("gamma");
        m.lambda = j.at("lambda");
        m.bounds.ell = parse_csv_line(j.at("bounds").get<std::string>());
        m.bounds.bootstrap_size = j.at("bootstrap").at("size");
        m.bounds.bootstrap_seed = j.at("bootstrap").at("seed");
        m.levels.m = parse_csv_line(j.at("levels").get<std::string>());
        m.cost = {j.at("cost").at("criterion"), j.at("cost").at("rate"), j.at("cost").at("total")};
        m.subspace = load_subspace(dir / j.at("subspace").at("file").get<std::string>());
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError((dir / "model.json").string() + ": " + e.what());
    }
}

inline void write_cell_outputs(const CellResult& cell, const PreparedData& data, const fs::path& dir) {
    write_trace_csv(cell.pso.trace, dir / "trace.csv");
    write_levels_csv(cell.model.levels, dir / "levels.csv");
    write_rate_csv(rate(data.density, QuantizerSpec(cell.model.bounds, cell.model.levels)), dir / "rate.csv");
    save_model(cell.model, dir);
}

struct GridResult {
    std::vector<CellResult> cells;  // gamma-major, in config order
    std::size_t chosen = 0;
};

// Smallest validation mean; ties go to smaller gamma, then smaller lambda.
inline std::size_t choose_cell(const std::vector<CellResult>& cells) {
    if (cells.empty()) throw DataError("empty grid");
    std::size_t best = 0;
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const auto key = [&](std::size_t c) {
            return std::make_tuple(cells[c].val_report.mean, cells[c].gamma, cells[c].lambda);
        };
        if (key(i) < key(best)) best = i;
    }
    return best;
}

// Rows are gamma values, columns lambda values, entries validation mean error.
inline void write_grid_csv(const GridResult& grid, const ExperimentConfig& cfg, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FileError("cannot write " + path.string());
    out << "gamma\\lambda";
    for (double l : cfg.lambda_grid) out << ',' << format_double(l);
    out << '\n';
    std::size_t c = 0;
    for (double g : cfg.gamma_grid) {
        out << format_double(g);
        for (std::size_t j = 0; j < cfg.lambda_grid.size(); ++j, ++c) out << ',' << format_double(grid.cells[c].val_report.mean);
        out << '\n';
    }
}

// Every cell writes into <output_dir>/cells/<cell_name>. Cells run on up to
// cfg.threads threads; finished cells are kept on disk if a later one throws.
inline GridResult run_grid(const PreparedData& data, const ExperimentConfig& cfg) {
    std::vector<std::pair<double, double>> pairs;
    for (double g : cfg.gamma_grid)
        for (double l : cfg.lambda_grid) pairs.emplace_back(g, l);

    GridResult grid;
    grid.cells.resize(pairs.size());
    auto run_cell = [&](std::size_t i, int pso_threads) {
        auto& cell = grid.cells[i];
        cell = optimize_cell(data, cfg, pairs[i].first, pairs[i].second, pso_threads);
        write_cell_outputs(cell, data, cfg.output_dir / "cells" / cell_name(cell.gamma, cell.lambda));
    };

    const auto workers = std::min<std::size_t>(pairs.size(), static_cast<std::size_t>(cfg.threads));
    if (workers <= 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) run_cell(i, cfg.threads);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = w; i < pairs.size(); i += workers) run_cell(i, 1);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    grid.chosen = choose_cell(grid.cells);
    write_grid_csv(grid, cfg, cfg.output_dir / "grid.csv");
    return grid;
}

// ----------------------------------------------------------------- exports

inline std::vector<unsigned char> min_max_bytes(const Eigen::VectorXd& v) {
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    std::vector<unsigned char> out(static_cast<std::size_t>(v.size()), 0);
    if (hi > lo)
        for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = to_byte(255.0 * (v(i) - lo) / (hi - lo));
    return out;
}

inline std::string numbered(const std::string& stem, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%02zu.pgm", stem.c_str(), i);
    return buf;
}

// Leading directions rendered through the inverse DCT, min-max scaled.
inline std::vector<fs::path> export_eigenfaces(const Subspace& subspace, const BlockLayout& layout, Eigen::Index count,
                                               const fs::path& output_dir) {
    if (count < 0 || count > subspace.p()) throw DimensionError("eigenface count exceeds subspace dimension");
    const Eigen::MatrixXd images = inverse_dct_pixels(subspace.u.leftCols(count), layout);
    std::vector<fs::path> written;
    for (Eigen::Index i = 0; i < count; ++i) {
        const auto path = output_dir / numbered("eigenface", static_cast<std::size_t>(i));
        write_pgm(path, {layout.height, layout.width, min_max_bytes(images.col(i))});
        written.push_back(path);
    }
    return written;
}

// For each of the first `count` samples writes quantized_XX.pgm and a
// side-by-side comparison_XX.pgm of original | centered | quantized. The
// centered panel maps [-255, 255] onto [0, 255].
inline std::vector<fs::path> export_quantized_images(const SpectrumSet& spectra, const LevelVector& levels,
                                                     const BoundVector& bounds, const Eigen::VectorXd& mean_image,
                                                     const fs::path& output_dir, Eigen::Index count) {
    const QuantizerSpec spec(bounds, levels);
    count = std::min(count, spectra.size());
    const auto& layout = spectra.layout;
    const Eigen::MatrixXd centered = inverse_dct_pixels(spectra.coeffs.leftCols(count), layout);
    const Eigen::MatrixXd quantized =
        inverse_dct_pixels(quantize(SpectrumSet{spectra.coeffs.leftCols(count), layout, {}}, spec).coeffs, layout);
    std::vector<fs::path> written;
    const int h = layout.height;
    const int w = layout.width;
    for (Eigen::Index i = 0; i < count; ++i) {
        const Eigen::VectorXd original = centered.col(i) + mean_image;
        const Eigen::VectorXd shown_centered = (centered.col(i).array() + 255.0) / 2.0;
        const Eigen::VectorXd restored = quantized.col(i) + mean_image;

        const auto qpath = output_dir / numbered("quantized", static_cast<std::size_t>(i));
        write_pgm(qpath, to_pgm(restored, h, w));
        written.push_back(qpath);

        PgmImage side{h, 3 * w, std::vector<unsigned char>(static_cast<std::size_t>(h) * 3 * w)};
        const std::array<const Eigen::VectorXd*, 3> panels{&original, &shown_centered, &restored};
        for (int r = 0; r < h; ++r)
            for (int p = 0; p < 3; ++p)
                for (int c = 0; c < w; ++c)
                    side.pixels[static_cast<std::size_t>(r) * 3 * w + static_cast<std::size_t>(p) * w + c] =
                        to_byte((*panels[static_cast<std::size_t>(p)])(static_cast<Eigen::Index>(r) * w + c));
        const auto cpath = output_dir / numbered("comparison", static_cast<std::size_t>(i));
        write_pgm(cpath, side);
        written.push_back(cpath);
    }
    return written;
}

// ------------------------------------------------------------------ report

// Saves the chosen cell's model as the final one under cfg.output_dir:
// model.json, subspace.bin, levels.csv, trace.csv. The subspace is refit on
// the training split at the chosen level vector.
inline QfdaModel finalize_grid(const GridResult& grid, const PreparedData& data, const ExperimentConfig& cfg) {
    const auto& chosen = grid.cells.at(grid.chosen);
    QfdaObjective objective(data.train, data.bounds, data.density,
                            objective_params(cfg, chosen.gamma, chosen.lambda, data.train));
    QfdaModel model = chosen.model;
    model.subspace = objective.solve(chosen.model.levels, subspace_dims(cfg, data.train)).subspace;
    save_model(model, cfg.output_dir);
    write_levels_csv(model.levels, cfg.output_dir / "levels.csv");
    write_trace_csv(chosen.pso.trace, cfg.output_dir / "trace.csv");
    return model;
}

// Writes errors_<method>_<split>.csv for the three splits.
inline std::array<EvalReport, 3> evaluate_and_write(const Subspace& s, const PreparedData& data,
                                                    const ExperimentConfig& cfg, const std::string& method) {
    auto reports = evaluate_all_splits(s, data, cfg, method);
    for (const auto& r : reports) write_errors_csv(r, cfg.output_dir / ("errors_" + method + "_" + r.split + ".csv"));
    return reports;
}

inline BaselineResult run_and_write_baseline(const PreparedData& data, const ExperimentConfig& cfg) {
    BaselineResult r;
    r.subspace = fit_fda(data, cfg);
    save_subspace(r.subspace, cfg.output_dir / "fda_subspace.bin");
    r.reports = evaluate_and_write(r.subspace, data, cfg, "fda");
    return r;
}

// report.md assembled from whatever result files exist in `dir`.
inline void write_report(const fs::path& dir) {
    std::ofstream out(dir / "report.md", std::ios::trunc);
    if (!out) throw FileError("cannot write " + (dir / "report.md").string());
    out << std::fixed << std::setprecision(4) << "# FDA vs QFDA\n";

    if (std::ifstream grid(dir / "grid.csv"); grid) {
        out << "\n## Validation mean error (rows gamma, columns lambda)\n\n";
        std::string line;
        bool header = true;
        while (std::getline(grid, line)) {
            std::string cells = "| " + line + " |";
            for (std::size_t pos; (pos = cells.find(',')) != std::string::npos;) cells.replace(pos, 1, " | ");
            out << cells << '\n';
            if (header) {
                const auto columns = std::count(line.begin(), line.end(), ',') + 1;
                out << '|';
                for (long i = 0; i < columns; ++i) out << "---|";
                out << '\n';
                header = false;
            }
        }
    }

    out << "\n## Error by split (mean ± std over leading dimensions)\n\n| method | train | val | test |\n|---|---|---|---|\n";
    for (const std::string method : {"fda", "qfda"}) {
        out << "| " << method << " |";
        for (const auto& split : kSplitNames) {
            const auto path = dir / ("errors_" + method + "_" + split + ".csv");
            if (!fs::exists(path)) {
                out << " - |";
                continue;
            }
            const auto r = read_errors_csv(path, split, method);
            out << ' ' << r.mean << " ± " << r.std << " (" << r.per_dim_errors.size() << " dims) |";
        }
        out << '\n';
    }

    if (fs::exists(dir / "model.json")) {
        const auto model = load_model(dir);
        out << "\n## Chosen model\n\ngamma = " << format_double(model.gamma) << ", lambda = " << format_double(model.lambda)
            << ", criterion = " << format_double(model.cost.criterion) << ", average rate = "
            << format_double(model.cost.rate) << " bits\n\nLevels m_k (8 x 8, row-major frequency):\n\n```\n";
        for (int k = 0; k < kFrequencies; ++k)
            out << std::setw(5) << model.levels.m[static_cast<std::size_t>(k)] << (k % 8 == 7 ? "\n" : "");
        out << "```\n";
    }
}

struct ExperimentResult {
    GridResult grid;
    QfdaModel final_model;
    std::array<EvalReport, 3> qfda_reports;
    BaselineResult baseline;
};

// Grid search, final model at the chosen cell, baseline and every report.
inline ExperimentResult run_experiment(const PreparedData& data, const ExperimentConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    ExperimentResult r;
    r.grid = run_grid(data, cfg);
    r.final_model = finalize_grid(r.grid, data, cfg);
    r.qfda_reports = evaluate_and_write(r.final_model.subspace, data, cfg, "qfda");
    r.baseline = run_and_write_baseline(data, cfg);
    write_report(cfg.output_dir);
    return r;
}

}  // namespace qfda
