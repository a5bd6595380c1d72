#pragma once

// Level-vector search: the QFDA objective -f_Q + gamma * r_bar and a
// global-best particle swarm over continuous positions that are rounded onto
// {2..ell_k} before every evaluation.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "qfda/block_dct.hpp"
#include "qfda/discriminant.hpp"
#include "qfda/errors.hpp"
#include "qfda/quantizer.hpp"
#include "qfda/rate_model.hpp"

namespace qfda {

struct PsoConfig {
    int particles = 5;
    int iterations = 10;
    double inertia = 0.7298;
    double cognitive = 1.49618;
    double social = 1.49618;
    std::uint64_t seed = 0;
    double gamma = 1.0;
    double lambda = 0.5;

    void validate() const {
        if (particles < 1) throw ConfigError("PSO needs at least one particle");
        if (iterations < 1) throw ConfigError("PSO needs at least one iteration");
        if (!(inertia > 0 && cognitive > 0 && social > 0)) throw ConfigError("PSO coefficients must be positive");
        if (!(gamma >= 0)) throw ConfigError("gamma must be nonnegative");
        if (!(lambda >= 0)) throw ConfigError("lambda must be nonnegative");
    }
};

struct CostBreakdown {
    double criterion = 0.0;  // f_Q
    double rate = 0.0;       // r_bar, bits
    double total = std::numeric_limits<double>::infinity();

    static CostBreakdown make(double criterion, double rate, double gamma) {
        return {criterion, rate, -criterion + gamma * rate};
    }
    static CostBreakdown failed() { return {}; }
    bool ok() const { return std::isfinite(total); }
};

struct ObjectiveParams {
    double gamma = 1.0;
    double lambda = 0.5;
    double epsilon = kDefaultEpsilon;
    Eigen::Index criterion_dims = 20;  // clipped to d' and to the data rank
};

// The QFDA cost for one level vector: quantize the training spectra, build
// the quantized scatters, take the leading directions and add the rate term.
// Results are memoized on m; per-frequency rates are memoized on (k, m_k).
// Safe to call from several threads.
class QfdaObjective {
public:
    QfdaObjective(const SpectrumSet& train, BoundVector bounds, FrequencyDensity density, ObjectiveParams params)
        : train_(train), bounds_(bounds), density_(std::move(density)), params_(params) {
        bounds_.validate();
        if (params_.criterion_dims < 1) throw ConfigError("criterion_dims must be >= 1");
    }

    const BoundVector& bounds() const { return bounds_; }
    const ObjectiveParams& params() const { return params_; }
    const FrequencyDensity& density() const { return density_; }

    Eigen::Index criterion_dims() const { return std::min(params_.criterion_dims, train_.dim()); }

    double average_rate(const LevelVector& m) {
        double sum = 0.0;
        for (int k = 0; k < kFrequencies; ++k) sum += frequency_rate_cached(k, m.m[static_cast<std::size_t>(k)]);
        return sum / kFrequencies;
    }

    struct Solution {
        SpectrumSet quantized;
        ScatterPair scatters;
        Subspace subspace;
    };

    // Full model at m, uncached; throws on numeric failure.
    Solution solve(const LevelVector& m, Eigen::Index p) const {
        const QuantizerSpec spec(bounds_, m);
        Solution s;
        s.quantized = quantize(train_, spec);
        s.scatters = quantized_scatters(train_, s.quantized, params_.lambda);
        s.subspace = solve_subspace(s.scatters, std::min(p, train_.dim()), params_.epsilon);
        return s;
    }

    // Throws NumericError (also on later cache hits) when the eigensolve fails.
    CostBreakdown evaluate(const LevelVector& m) {
        m.validate(bounds_);
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(m); it != cache_.end()) {
                if (!it->second) throw NumericError("cost evaluation failed for this level vector");
                return *it->second;
            }
        }
        std::optional<CostBreakdown> result;
        try {
            const auto sol = solve(m, criterion_dims());
            // Directions beyond the data rank carry eigenvalue 0; leave them out.
            const auto& basis = sol.scatters.basis;
            const auto q = basis.rows() == 0 ? sol.subspace.p()
                                             : std::clamp<Eigen::Index>(basis.cols(), 1, sol.subspace.p());
            const double f = criterion(sol.scatters, sol.subspace, q);
            result = CostBreakdown::make(f, average_rate(m), params_.gamma);
        } catch (const NumericError&) {
            result.reset();
        }
        std::lock_guard lock(mutex_);
        auto [it, inserted] = cache_.emplace(m, result);
        if (inserted) ++evaluations_;
        if (!it->second) throw NumericError("cost evaluation failed for this level vector");
        return *it->second;
    }

    CostBreakdown operator()(const LevelVector& m) { return evaluate(m); }

    std::size_t full_evaluations() const {
        std::lock_guard lock(mutex_);
        return evaluations_;
    }

private:
    double frequency_rate_cached(int k, int mk) {
        const auto key = std::make_pair(k, mk);
        {
            std::lock_guard lock(mutex_);
            if (auto it = rate_cache_.find(key); it != rate_cache_.end()) return it->second;
        }
        const double r = frequency_rate(density_.kernels[static_cast<std::size_t>(k)],
                                        StepParams::make(bounds_.ell[static_cast<std::size_t>(k)], mk));
        std::lock_guard lock(mutex_);
        return rate_cache_.emplace(key, r).first->second;
    }

    const SpectrumSet& train_;
    BoundVector bounds_;
    FrequencyDensity density_;
    ObjectiveParams params_;
    mutable std::mutex mutex_;
    std::map<LevelVector, std::optional<CostBreakdown>> cache_;
    std::map<std::pair<int, int>, double> rate_cache_;
    std::size_t evaluations_ = 0;
};

using Position = std::array<double, kFrequencies>;

struct TraceEntry {
    int iteration = 0;
    CostBreakdown best;
    LevelVector best_m;
};

struct SwarmState {
    std::vector<Position> positions;
    std::vector<Position> velocities;
    std::vector<Position> personal_best;
    std::vector<CostBreakdown> personal_best_cost;
    Position global_best{};
    CostBreakdown global_best_cost;
    LevelVector global_best_m;
    std::vector<TraceEntry> history;
};

struct PsoResult {
    LevelVector best;
    CostBreakdown breakdown;
    std::vector<TraceEntry> trace;
    SwarmState final_state;
};

namespace detail {

inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Global-best PSO. `cost` maps a projected LevelVector to a CostBreakdown;
// a thrown qfda::Error counts as an infinite cost. Every iteration evaluates
// all particles once (the first evaluates the initial positions), so there
// are at most particles * iterations calls. Random numbers are drawn on the
// calling thread and bests are reduced in particle order, so the result does
// not depend on `threads`.
template <typename Cost>
PsoResult run_pso(const BoundVector& bounds, const PsoConfig& config, Cost&& cost, int threads = 1) {
    config.validate();
    bounds.validate();
    const auto np = static_cast<std::size_t>(config.particles);
    std::mt19937_64 rng(config.seed);

    SwarmState st;
    st.positions.resize(np);
    st.velocities.assign(np, Position{});
    for (auto& x : st.positions)
        for (int k = 0; k < kFrequencies; ++k)
            x[static_cast<std::size_t>(k)] = 2.0 + detail::unit_uniform(rng) * (bounds.ell[static_cast<std::size_t>(k)] - 2);
    st.personal_best = st.positions;
    st.personal_best_cost.assign(np, CostBreakdown::failed());
    st.global_best = st.positions.front();
    st.global_best_m = project_levels(st.global_best, bounds);

    auto evaluate_one = [&](const Position& x) -> CostBreakdown {
        try {
            return cost(project_levels(x, bounds));
        } catch (const Error&) {
            return CostBreakdown::failed();
        }
    };

    std::vector<CostBreakdown> costs(np);
    for (int it = 0; it < config.iterations; ++it) {
        if (it > 0) {
            for (std::size_t i = 0; i < np; ++i)
                for (std::size_t k = 0; k < kFrequencies; ++k) {
                    const double r1 = detail::unit_uniform(rng);
                    const double r2 = detail::unit_uniform(rng);
                    auto& v = st.velocities[i][k];
                    auto& x = st.positions[i][k];
                    v = config.inertia * v + config.cognitive * r1 * (st.personal_best[i][k] - x) +
                        config.social * r2 * (st.global_best[k] - x);
                    x += v;
                }
        }

        if (threads > 1 && np > 1) {
            const std::size_t workers = std::min(np, static_cast<std::size_t>(threads));
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    for (std::size_t i = w; i < np; i += workers) costs[i] = evaluate_one(st.positions[i]);
                });
        } else {
            for (std::size_t i = 0; i < np; ++i) costs[i] = evaluate_one(st.positions[i]);
        }

        for (std::size_t i = 0; i < np; ++i) {
            if (costs[i].total < st.personal_best_cost[i].total) {
                st.personal_best_cost[i] = costs[i];
                st.personal_best[i] = st.positions[i];
            }
            if (costs[i].total < st.global_best_cost.total) {
                st.global_best_cost = costs[i];
                st.global_best = st.positions[i];
                st.global_best_m = project_levels(st.positions[i], bounds);
            }
        }
        st.history.push_back({it, st.global_best_cost, st.global_best_m});
    }

    if (!st.global_best_cost.ok()) throw OptimizationError("every PSO cost evaluation failed");
    PsoResult result;
    result.best = st.global_best_m;
    result.breakdown = st.global_best_cost;
    result.trace = st.history;
    result.final_state = std::move(st);
    return result;
}

// iteration,best_total,best_criterion,best_rate,m_0..m_63
inline void write_trace_csv(const std::vector<TraceEntry>& trace, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FileError("cannot write " + path.string());
    out << std::setprecision(17) << "iteration,best_total,best_criterion,best_rate";
    for (int k = 0; k < kFrequencies; ++k) out << ",m_" << k;
    out << '\n';
    for (const auto& e : trace)
        out << e.iteration << ',' << e.best.total << ',' << e.best.criterion << ',' << e.best.rate << ','
            << to_csv_line(e.best_m.m) << '\n';
}

}  // namespace qfda
