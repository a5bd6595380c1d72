#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace qfda;
using namespace qfda::testing;

namespace {

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

ExperimentConfig fashion_config(const fs::path& out) {
    ExperimentConfig cfg;
    cfg.load_file(data_dir() / ".." / ".." / "configs" / "fashion_c01.conf");
    cfg.output_dir = out;
    return cfg;
}

CellResult fake_cell(double gamma, double lambda, double val_mean) {
    CellResult c;
    c.gamma = gamma;
    c.lambda = lambda;
    c.val_report.per_dim_errors = {val_mean};
    c.val_report.aggregate();
    return c;
}

// Well-separated Gaussian classes in a 64-dimensional spectrum. Training
// sets need n > 64 for a nonsingular within-class scatter.
SpectrumSet gaussian_classes(Eigen::Index n, std::mt19937_64& rng) {
    SpectrumSet s;
    s.layout = BlockLayout::for_image(8, 8);
    s.coeffs = random_matrix(64, n, rng);
    s.labels = cyclic_labels(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) s.coeffs(s.labels[static_cast<std::size_t>(i)], i) += 8.0;
    return s;
}

}  // namespace

TEST(Config, ParseFileAndResolvePaths) {
    const auto dir = scratch_dir("config");
    std::ofstream(dir / "a.conf") << "# comment\n"
                                     "images = data/img\n"
                                     "labels = /abs/lab  # trailing\n"
                                     "gamma_grid = 0.1, 1,10\n"
                                     "lambda_grid = 2\n"
                                     "particles = 7\n"
                                     "seed = 5\n"
                                     "pso_seed = 99\n"
                                     "classes = 0, 1\n";
    ExperimentConfig cfg;
    cfg.load_file(dir / "a.conf");
    EXPECT_EQ(cfg.images, dir / "data/img");
    EXPECT_EQ(cfg.labels, fs::path("/abs/lab"));
    EXPECT_EQ(cfg.gamma_grid, (std::vector<double>{0.1, 1, 10}));
    EXPECT_EQ(cfg.lambda_grid, std::vector<double>{2});
    EXPECT_EQ(cfg.pso.particles, 7);
    EXPECT_EQ(cfg.classes, (std::vector<int>{0, 1}));
    EXPECT_EQ(cfg.effective_split_seed(), 5u);
    EXPECT_EQ(cfg.effective_bootstrap_seed(), 6u);
    EXPECT_EQ(cfg.effective_pso_seed(), 99u);
    EXPECT_EQ(cfg.effective_bootstrap_size(40), 40);
    EXPECT_EQ(cfg.effective_bootstrap_size(400), 100);
    cfg.validate();
}

TEST(Config, Errors) {
    ExperimentConfig cfg;
    EXPECT_THROW(cfg.set("no_such_key", "1"), ConfigError);
    EXPECT_THROW(cfg.set("k_nn", "ten"), ConfigError);
    EXPECT_THROW(cfg.set("epsilon", "1e-7x"), ConfigError);
    const auto dir = scratch_dir("config_err");
    std::ofstream(dir / "b.conf") << "seed = 1\njust words\n";
    EXPECT_THROW(cfg.load_file(dir / "b.conf"), ConfigError);
    EXPECT_THROW(cfg.load_file(dir / "missing.conf"), FileError);
    cfg = {};
    cfg.gamma_grid = {-1};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.dataset = "jpeg";
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Grid, ChoiceAndTieRule) {
    std::vector<CellResult> cells{fake_cell(0.1, 0.5, 0.2), fake_cell(0.1, 2, 0.1), fake_cell(1, 0.5, 0.1),
                                  fake_cell(1, 2, 0.3)};
    EXPECT_EQ(choose_cell(cells), 1u);
    cells[1].val_report.mean = 0.15;
    EXPECT_EQ(choose_cell(cells), 2u);
    std::vector<CellResult> tied{fake_cell(1, 0.5, 0.1), fake_cell(0.1, 2, 0.1)};
    EXPECT_EQ(choose_cell(tied), 1u);
    EXPECT_THROW(choose_cell({}), DataError);
}

TEST(Grid, CsvShape) {
    ExperimentConfig cfg;
    cfg.gamma_grid = {0.1, 1};
    cfg.lambda_grid = {0.5, 2, 4};
    GridResult grid;
    for (double g : cfg.gamma_grid)
        for (double l : cfg.lambda_grid) grid.cells.push_back(fake_cell(g, l, 10 * g + l));
    const auto dir = scratch_dir("grid");
    write_grid_csv(grid, cfg, dir / "grid.csv");
    const auto lines = lines_of(dir / "grid.csv");
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "gamma\\lambda,0.5,2,4");
    EXPECT_EQ(lines[1], "0.1,1.5,3,5");
    EXPECT_EQ(lines[2], "1,10.5,12,14");
    EXPECT_EQ(cell_name(0.1, 2), "gamma_0.1_lambda_2");
}

TEST(Model, SaveLoadRoundTripAndLevelsCsv) {
    auto& rng = rng_for(101);
    QfdaModel m;
    for (int k = 0; k < kFrequencies; ++k) {
        m.bounds.ell[k] = 2 + k % 9;
        m.levels.m[k] = 2 + (k % 9) / 2;
    }
    m.bounds.bootstrap_size = 100;
    m.bounds.bootstrap_seed = 8;
    m.epsilon = 1e-7;
    m.gamma = 0.1;
    m.lambda = 2;
    m.cost = CostBreakdown::make(12.5, 1.25, 0.1);
    m.layout = BlockLayout::for_image(28, 28);
    m.subspace.u = random_matrix(1024, 3, rng);
    m.subspace.eigenvalues = Eigen::Vector3d(3, 2, 1);
    const auto dir = scratch_dir("model");
    save_model(m, dir);
    const auto back = load_model(dir);
    EXPECT_EQ(back.bounds.ell, m.bounds.ell);
    EXPECT_EQ(back.bounds.bootstrap_size, 100);
    EXPECT_EQ(back.bounds.bootstrap_seed, 8u);
    EXPECT_EQ(back.levels, m.levels);
    EXPECT_EQ(back.gamma, m.gamma);
    EXPECT_EQ(back.lambda, m.lambda);
    EXPECT_EQ(back.epsilon, m.epsilon);
    EXPECT_EQ(back.cost.total, m.cost.total);
    EXPECT_EQ(back.layout, m.layout);
    EXPECT_EQ(back.subspace.u, m.subspace.u);

    write_levels_csv(m.levels, dir / "levels.csv");
    const auto lines = lines_of(dir / "levels.csv");
    ASSERT_EQ(lines.size(), 65u);
    EXPECT_EQ(lines[0], "k,m_k");
    EXPECT_EQ(lines[10], "9,2");
    EXPECT_EQ(read_levels_csv(dir / "levels.csv"), m.levels);

    std::ofstream(dir / "model.json", std::ios::trunc) << "{\"format\": \"other\"}";
    EXPECT_THROW(load_model(dir), FormatError);
}

TEST(Export, EigenfacesOfPureDcDirection) {
    Subspace s;
    s.u = Eigen::MatrixXd::Zero(256, 18);
    for (Eigen::Index j = 0; j < 18; ++j) s.u(64 * (j % 4), j) = 1.0;
    const auto layout = BlockLayout::for_image(16, 16);
    const auto dir = scratch_dir("eigenfaces");
    const auto files = export_eigenfaces(s, layout, 18, dir);
    ASSERT_EQ(files.size(), 18u);
    EXPECT_EQ(files.front().filename(), "eigenface_00.pgm");
    EXPECT_EQ(files.back().filename(), "eigenface_17.pgm");
    const auto img = read_pgm(dir / "eigenface_00.pgm");
    ASSERT_EQ(img.height, 16);
    ASSERT_EQ(img.width, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            EXPECT_EQ(img.pixels[static_cast<std::size_t>(r * 16 + c)], (r < 8 && c < 8) ? 255 : 0);
    EXPECT_THROW(export_eigenfaces(s, layout, 19, dir), DimensionError);
}

TEST(Export, CoarsestQuantizationStillWritesImages) {
    auto& rng = rng_for(102);
    const auto spectra = random_spectra(12, 10, 4, 2, rng, 20.0);
    BoundVector bounds;
    bounds.ell.fill(9);
    const auto levels = LevelVector::filled(2);
    const auto dir = scratch_dir("quantized");
    const Eigen::VectorXd mean = Eigen::VectorXd::Constant(120, 128.0);
    const auto files = export_quantized_images(spectra, levels, bounds, mean, dir, 3);
    ASSERT_EQ(files.size(), 6u);
    const auto q = read_pgm(dir / "quantized_02.pgm");
    EXPECT_EQ(q.height, 12);
    EXPECT_EQ(q.width, 10);
    const auto c = read_pgm(dir / "comparison_00.pgm");
    EXPECT_EQ(c.width, 30);
    const QuantizerSpec spec(bounds, levels);
    const auto once = quantize(spectra, spec);
    EXPECT_EQ(quantize(once, spec).coeffs, once.coeffs);
}

TEST(Baseline, SeparatedGaussiansAreClassified) {
    auto& rng = rng_for(103);
    PreparedData data;
    data.train = gaussian_classes(200, rng);
    data.val = gaussian_classes(30, rng);
    data.test = gaussian_classes(30, rng);
    ExperimentConfig cfg;
    cfg.max_dims = 2;
    const auto r = run_baseline_fda(data, cfg);
    EXPECT_EQ(r.subspace.p(), 2);
    for (const auto& rep : r.reports) EXPECT_LE(rep.mean, 0.05) << rep.split;
}

TEST(Pipeline, PrepareFixtureAndRoundTrip) {
    const auto dir = scratch_dir("prepare");
    auto cfg = fashion_config(dir);
    const auto data = prepare(cfg);
    EXPECT_EQ(data.train.size(), 120);
    EXPECT_EQ(data.val.size(), 40);
    EXPECT_EQ(data.test.size(), 40);
    EXPECT_EQ(data.train.dim(), 1024);
    EXPECT_LE(data.train.coeffs.rowwise().mean().cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_EQ(data.bounds.bootstrap_size, 100);
    EXPECT_EQ(data.bounds.bootstrap_seed, cfg.effective_bootstrap_seed());
    save_prepared(data, dir / "prepared");
    const auto back = load_prepared(dir / "prepared", cfg);
    EXPECT_EQ(back.train.coeffs, data.train.coeffs);
    EXPECT_EQ(back.test.labels, data.test.labels);
    EXPECT_EQ(back.mean_image, data.mean_image);
    EXPECT_EQ(back.indices.val, data.indices.val);
    EXPECT_EQ(back.bounds.ell, data.bounds.ell);

    cfg.max_train_samples = 50;
    const auto capped = prepare(cfg);
    EXPECT_EQ(capped.train.size(), 50);
    EXPECT_EQ(capped.val.labels, data.val.labels);
}

TEST(Pipeline, SmallExperimentWritesEveryArtifact) {
    const auto dir = scratch_dir("experiment");
    auto cfg = fashion_config(dir);
    cfg.gamma_grid = {1};
    cfg.lambda_grid = {0.5};
    cfg.pso.particles = 2;
    cfg.pso.iterations = 2;
    const auto data = prepare(cfg);
    const auto r = run_experiment(data, cfg);
    ASSERT_EQ(r.grid.cells.size(), 1u);
    for (const char* f : {"grid.csv", "model.json", "subspace.bin", "levels.csv", "trace.csv", "fda_subspace.bin",
                          "report.md", "errors_fda_train.csv", "errors_fda_val.csv", "errors_fda_test.csv",
                          "errors_qfda_train.csv", "errors_qfda_val.csv", "errors_qfda_test.csv"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    const auto cell = dir / "cells" / "gamma_1_lambda_0.5";
    for (const char* f : {"trace.csv", "levels.csv", "rate.csv", "model.json", "subspace.bin"})
        EXPECT_TRUE(fs::exists(cell / f)) << f;
    const auto model = load_model(dir);
    EXPECT_EQ(model.levels, r.grid.cells[0].model.levels);
    EXPECT_EQ(model.subspace.p(), 20);
    EXPECT_EQ(lines_of(dir / "trace.csv").size(), 3u);
    EXPECT_EQ(read_errors_csv(dir / "errors_qfda_val.csv").mean, r.qfda_reports[1].mean);
    EXPECT_NE(read_file(dir / "report.md").find("## Chosen model"), std::string::npos);
}
