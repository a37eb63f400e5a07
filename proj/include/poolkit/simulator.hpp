#ifndef POOLKIT_SIMULATOR_HPP
#define POOLKIT_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "poolkit/model.hpp"
#include "poolkit/strategies.hpp"

namespace poolkit {

struct SimulationConfig {
    StrategySpec strategy;
    double prevalence = 0.0;
    int population = 0;
    std::int64_t trials = 1;
    std::uint64_t master_seed = 0;
    int threads = 0; // 0 = hardware concurrency
};

struct SimulationSummary {
    std::int64_t trials = 0;
    double mean_tests = 0.0;
    double stderr_tests = 0.0;
    double mean_rounds = 0.0;
    double mean_tpp = 0.0;
};

// Runs `trials` independent strategy executions. Trial t draws its infection
// vector (and, for double pooling, its partition) from a seed derived from
// (master_seed, t), so results are bit-identical for any thread count.
SimulationSummary simulate(const SimulationConfig& config);

// Deterministic parallel accumulation of integer-valued per-trial statistics.
// `trial_fn(t)` returns (tests, rounds) for trial t. Exposed for reuse by the
// cohort evaluator.
struct TrialStats {
    std::int64_t tests = 0;
    int rounds = 0;
};
SimulationSummary accumulate_trials(std::int64_t trials, int population, int threads,
                                    const std::function<TrialStats(std::int64_t)>& trial_fn);

// Mean tests for the multi-stage (binary tree) family over a fixed population,
// one cell per (pool size, prevalence) pair.
struct Table1Result {
    std::vector<int> sizes;
    std::vector<double> prevalences;
    std::vector<std::vector<double>> mean_tests;   // [size][p]
    std::vector<std::vector<double>> stderr_tests; // [size][p]
    int population = 32;
};
Table1Result replicate_table1(std::int64_t trials, std::uint64_t master_seed, int threads = 0);

// Best tests-per-patient by method for p in {0.01..0.05}. Analytic rows come
// from the closed forms; tree and matrix rows search the pool size by
// simulation; the double-pooling row minimizes its closed form.
struct Table2Result {
    std::vector<double> prevalences;
    std::vector<double> single_tpp;
    std::vector<int> single_n;
    std::vector<double> tree_tpp;
    std::vector<int> tree_n;
    std::vector<double> tree_stderr;
    std::vector<double> grid_worst_tpp;
    std::vector<int> grid_worst_n;
    std::vector<double> grid_sim_tpp;
    std::vector<int> grid_sim_n;
    std::vector<double> grid_sim_stderr;
    std::vector<double> double_tpp;
    std::vector<int> double_s;
};
Table2Result replicate_table2(std::int64_t trials, std::uint64_t master_seed, int threads = 0);

enum class StrategyFamily { individual, dorfman, tree, grid2d, double_pooling };

StrategyFamily family_from_name(const std::string& name);
const char* family_name(StrategyFamily family);

// Tests-per-patient dataset over a (p, n) grid, for redrawing the efficiency
// plots. Closed-form families are evaluated exactly (trials/stderr zero); the
// tree family is simulated on single blocks of size n.
struct SweepRow {
    std::string strategy;
    double p = 0.0;
    int n = 0;
    int population = 0;
    std::int64_t trials = 0;
    double mean_tests = 0.0;
    double stderr_tests = 0.0;
    double mean_tpp = 0.0;
    double mean_rounds = 0.0;
};
std::vector<SweepRow> sweep(StrategyFamily family, const std::vector<double>& prevalences,
                            const std::vector<int>& sizes, int population, std::int64_t trials,
                            std::uint64_t master_seed, int threads = 0);

} // namespace poolkit

#endif
