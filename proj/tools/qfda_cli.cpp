// Command-line front end for the FDA vs QFDA experiment.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "qfda/qfda.hpp"

namespace {

using qfda::ExperimentConfig;
using qfda::PreparedData;

qfda::fs::path prepared_dir(const ExperimentConfig& cfg) { return cfg.output_dir / "prepared"; }

PreparedData load_or_prepare(const ExperimentConfig& cfg) {
    const auto dir = prepared_dir(cfg);
    if (qfda::fs::exists(dir / "train.spec")) return qfda::load_prepared(dir, cfg);
    auto data = qfda::prepare(cfg);
    qfda::save_prepared(data, dir);
    return data;
}

void print_report(const qfda::EvalReport& r) {
    std::cout << r.method << ' ' << r.split << ": mean error " << r.mean << " (std " << r.std << ", "
              << r.per_dim_errors.size() << " dims" << (r.truncated ? ", truncated" : "") << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantized Fisher discriminant analysis in the block-DCT domain"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<int> threads;
    app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "override a config key (key=value), repeatable");
    app.add_option("--seed", seed, "base seed for split, bootstrap and PSO");
    app.add_option("--output-dir", output_dir, "directory for all outputs");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    auto* prepare_cmd = app.add_subcommand("prepare", "load, split, center and transform; cache spectra");
    auto* optimize_cmd = app.add_subcommand("optimize", "PSO over level vectors for one (gamma, lambda)");
    std::optional<double> gamma, lambda;
    optimize_cmd->add_option("--gamma", gamma, "rate weight (default: first gamma_grid value)");
    optimize_cmd->add_option("--lambda", lambda, "cross-term weight (default: first lambda_grid value)");
    auto* grid_cmd = app.add_subcommand("grid", "optimize every grid cell and keep the best by validation error");
    auto* baseline_cmd = app.add_subcommand("baseline", "plain FDA on the non-quantized spectra");
    auto* evaluate_cmd = app.add_subcommand("evaluate", "k-NN errors of the saved QFDA model on all splits");
    std::string model_dir;
    evaluate_cmd->add_option("--model", model_dir, "directory holding model.json (default: output dir)");

    auto* eigen_cmd = app.add_subcommand("export-eigenfaces", "render leading directions as PGM images");
    int eigen_count = 18;
    std::string eigen_method = "qfda";
    eigen_cmd->add_option("--count", eigen_count, "number of directions");
    eigen_cmd->add_option("--method", eigen_method, "qfda or fda")->check(CLI::IsMember({"qfda", "fda"}));
    eigen_cmd->add_option("--model", model_dir, "directory holding model.json (default: output dir)");

    auto* quant_cmd = app.add_subcommand("export-quantized", "original | centered | quantized image strips");
    int quant_count = 10;
    std::string quant_split = "train";
    quant_cmd->add_option("--count", quant_count, "number of images");
    quant_cmd->add_option("--split", quant_split, "train, val or test")->check(CLI::IsMember({"train", "val", "test"}));
    quant_cmd->add_option("--model", model_dir, "directory holding model.json (default: output dir)");

    auto* report_cmd = app.add_subcommand("report", "summarize result files into report.md");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg.load_file(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw qfda::ConfigError("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (seed) cfg.seed = *seed;
        if (output_dir) cfg.output_dir = *output_dir;
        if (threads) cfg.threads = *threads;
        cfg.validate();
        qfda::fs::create_directories(cfg.output_dir);
        const auto model_path = model_dir.empty() ? cfg.output_dir : qfda::fs::path(model_dir);

        if (*prepare_cmd) {
            const auto data = qfda::prepare(cfg);
            qfda::save_prepared(data, prepared_dir(cfg));
            std::cout << "prepared " << data.train.size() << '/' << data.val.size() << '/' << data.test.size()
                      << " train/val/test images, d' = " << data.train.dim() << " -> " << prepared_dir(cfg) << '\n';
            std::cout << "bounds: " << qfda::to_csv_line(data.bounds.ell) << '\n';
        } else if (*optimize_cmd) {
            const auto data = load_or_prepare(cfg);
            const double g = gamma.value_or(cfg.gamma_grid.front());
            const double l = lambda.value_or(cfg.lambda_grid.front());
            const auto cell = qfda::optimize_cell(data, cfg, g, l, cfg.threads);
            const auto dir = cfg.output_dir / "cells" / qfda::cell_name(g, l);
            qfda::write_cell_outputs(cell, data, dir);
            std::cout << "best cost " << cell.model.cost.total << " (criterion " << cell.model.cost.criterion
                      << ", rate " << cell.model.cost.rate << ") after " << cell.evaluations << " evaluations\n";
            print_report(cell.val_report);
            std::cout << "levels: " << qfda::to_csv_line(cell.model.levels.m) << "\nwrote " << dir << '\n';
        } else if (*grid_cmd) {
            const auto data = load_or_prepare(cfg);
            const auto grid = qfda::run_grid(data, cfg);
            const auto model = qfda::finalize_grid(grid, data, cfg);
            for (const auto& c : grid.cells)
                std::cout << "gamma " << c.gamma << " lambda " << c.lambda << ": val mean error " << c.val_report.mean << '\n';
            std::cout << "chosen gamma " << model.gamma << " lambda " << model.lambda << "; wrote "
                      << cfg.output_dir / "grid.csv" << '\n';
        } else if (*baseline_cmd) {
            const auto data = load_or_prepare(cfg);
            for (const auto& r : qfda::run_and_write_baseline(data, cfg).reports) print_report(r);
        } else if (*evaluate_cmd) {
            const auto data = load_or_prepare(cfg);
            const auto model = qfda::load_model(model_path);
            for (const auto& r : qfda::evaluate_and_write(model.subspace, data, cfg, "qfda")) print_report(r);
        } else if (*eigen_cmd) {
            qfda::Subspace subspace;
            qfda::BlockLayout layout;
            if (eigen_method == "fda") {
                const auto data = load_or_prepare(cfg);
                subspace = qfda::fs::exists(cfg.output_dir / "fda_subspace.bin")
                               ? qfda::load_subspace(cfg.output_dir / "fda_subspace.bin")
                               : qfda::fit_fda(data, cfg);
                layout = data.train.layout;
            } else {
                const auto model = qfda::load_model(model_path);
                subspace = model.subspace;
                layout = model.layout;
            }
            const auto count = std::min<Eigen::Index>(eigen_count, subspace.p());
            const auto files = qfda::export_eigenfaces(subspace, layout, count, cfg.output_dir / "eigenfaces" / eigen_method);
            std::cout << "wrote " << files.size() << " images to " << cfg.output_dir / "eigenfaces" / eigen_method << '\n';
        } else if (*quant_cmd) {
            const auto data = load_or_prepare(cfg);
            const auto model = qfda::load_model(model_path);
            const auto files = qfda::export_quantized_images(data.split(quant_split), model.levels, model.bounds,
                                                             data.mean_image, cfg.output_dir / "quantized", quant_count);
            std::cout << "wrote " << files.size() << " images to " << cfg.output_dir / "quantized" << '\n';
        } else if (*report_cmd) {
            qfda::write_report(cfg.output_dir);
            std::cout << "wrote " << cfg.output_dir / "report.md" << '\n';
        }
    } catch (const qfda::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
