#include "poolkit/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "poolkit/analytic.hpp"
#include "poolkit/rng.hpp"

namespace poolkit {

namespace {

constexpr std::int64_t kChunk = 8192; // fixed chunking keeps reductions order-stable
constexpr std::uint64_t kPartitionSalt = 0x7031ULL;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct ChunkSums {
    std::int64_t tests = 0;
    std::int64_t tests_sq = 0;
    std::int64_t rounds = 0;
};

} // namespace

SimulationSummary accumulate_trials(std::int64_t trials, int population, int threads,
                                    const std::function<TrialStats(std::int64_t)>& trial_fn) {
    if (trials < 1) {
        throw validation_error(errc::invalid_population, "trials must be >= 1");
    }
    const std::int64_t num_chunks = (trials + kChunk - 1) / kChunk;
    std::vector<ChunkSums> sums(static_cast<std::size_t>(num_chunks));

    const int nthreads =
        static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), num_chunks));
    std::atomic<std::int64_t> next_chunk{0};
    auto worker = [&]() {
        for (;;) {
            const std::int64_t c = next_chunk.fetch_add(1);
            if (c >= num_chunks) return;
            const std::int64_t lo = c * kChunk;
            const std::int64_t hi = std::min(lo + kChunk, trials);
            ChunkSums s;
            for (std::int64_t t = lo; t < hi; ++t) {
                const TrialStats st = trial_fn(t);
                s.tests += st.tests;
                s.tests_sq += st.tests * st.tests;
                s.rounds += st.rounds;
            }
            sums[static_cast<std::size_t>(c)] = s;
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Integer sums are exact, so the combination order (and hence the thread
    // count) cannot perturb the result.
    std::int64_t tot_tests = 0, tot_sq = 0, tot_rounds = 0;
    for (const auto& s : sums) {
        tot_tests += s.tests;
        tot_sq += s.tests_sq;
        tot_rounds += s.rounds;
    }

    SimulationSummary out;
    out.trials = trials;
    const double n = static_cast<double>(trials);
    out.mean_tests = static_cast<double>(tot_tests) / n;
    out.mean_rounds = static_cast<double>(tot_rounds) / n;
    out.mean_tpp = population > 0 ? out.mean_tests / population : 0.0;
    if (trials > 1) {
        const double var =
            (static_cast<double>(tot_sq) - static_cast<double>(tot_tests) * out.mean_tests) /
            static_cast<double>(trials - 1);
        out.stderr_tests = std::sqrt(std::max(var, 0.0) / n);
    }
    return out;
}

SimulationSummary simulate(const SimulationConfig& config) {
    const Probability p(config.prevalence);
    if (config.population < 1) {
        throw validation_error(errc::invalid_population, "population must be >= 1");
    }
    const auto trial_fn = [&](std::int64_t t) -> TrialStats {
        const std::uint64_t child = derive_seed(config.master_seed, static_cast<std::uint64_t>(t));
        const InfectionVector vec = sample_infection_vector(p, config.population, child);
        StrategySpec spec = config.strategy;
        if (auto* dp = std::get_if<DoublePoolingSpec>(&spec)) {
            dp->partition_seed = derive_seed(child, kPartitionSalt);
        }
        const StrategyOutcome out = run_strategy(spec, vec);
        return TrialStats{out.tests, out.rounds};
    };
    return accumulate_trials(config.trials, config.population, config.threads, trial_fn);
}

Table1Result replicate_table1(std::int64_t trials, std::uint64_t master_seed, int threads) {
    Table1Result res;
    res.sizes = {1, 2, 4, 8, 16, 32};
    res.prevalences = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
    res.population = 32;
    res.mean_tests.assign(res.sizes.size(), std::vector<double>(res.prevalences.size(), 0.0));
    res.stderr_tests.assign(res.sizes.size(), std::vector<double>(res.prevalences.size(), 0.0));
    for (std::size_t i = 0; i < res.sizes.size(); ++i) {
        for (std::size_t j = 0; j < res.prevalences.size(); ++j) {
            SimulationConfig cfg;
            cfg.strategy = BinaryTreeSpec{res.sizes[i], true};
            cfg.prevalence = res.prevalences[j];
            cfg.population = res.population;
            cfg.trials = trials;
            cfg.master_seed = derive_seed(master_seed, i * 100 + j);
            cfg.threads = threads;
            const SimulationSummary s = simulate(cfg);
            res.mean_tests[i][j] = s.mean_tests;
            res.stderr_tests[i][j] = s.stderr_tests;
        }
    }
    return res;
}

Table2Result replicate_table2(std::int64_t trials, std::uint64_t master_seed, int threads) {
    Table2Result res;
    res.prevalences = {0.01, 0.02, 0.03, 0.04, 0.05};
    for (std::size_t j = 0; j < res.prevalences.size(); ++j) {
        const Probability p(res.prevalences[j]);

        const OptimizationResult dorf = dorfman_optimal_size(p);
        res.single_tpp.push_back(dorf.best_tpp);
        res.single_n.push_back(dorf.best_size);

        // Tree row: simulate one block of each size, keep the best TPP.
        double best_tpp = 1.0;
        int best_n = 1;
        double best_se = 0.0;
        for (int n = 2; n <= kMaxPoolSize; ++n) {
            SimulationConfig cfg;
            cfg.strategy = BinaryTreeSpec{n, true};
            cfg.prevalence = p.value();
            cfg.population = n;
            cfg.trials = trials;
            cfg.master_seed = derive_seed(master_seed, 1000 + j * 64 + static_cast<std::size_t>(n));
            cfg.threads = threads;
            const SimulationSummary s = simulate(cfg);
            if (s.mean_tpp < best_tpp) {
                best_tpp = s.mean_tpp;
                best_n = n;
                best_se = s.stderr_tests / n;
            }
        }
        res.tree_tpp.push_back(best_tpp);
        res.tree_n.push_back(best_n);
        res.tree_stderr.push_back(best_se);

        const OptimizationResult grid = grid2d_optimal_size(p, 400, PoolSize(20));
        res.grid_worst_tpp.push_back(grid.best_tpp);
        res.grid_worst_n.push_back(grid.best_size);

        // Simulated matrix row: one n x n matrix per trial, n^2 <= 400.
        best_tpp = 1.0;
        best_n = 1;
        best_se = 0.0;
        for (int n = 2; n <= 20; ++n) {
            SimulationConfig cfg;
            cfg.strategy = Grid2dSpec{n, true, std::nullopt};
            cfg.prevalence = p.value();
            cfg.population = n * n;
            cfg.trials = trials;
            cfg.master_seed = derive_seed(master_seed, 2000 + j * 64 + static_cast<std::size_t>(n));
            cfg.threads = threads;
            const SimulationSummary s = simulate(cfg);
            if (s.mean_tpp < best_tpp) {
                best_tpp = s.mean_tpp;
                best_n = n;
                best_se = s.stderr_tests / cfg.population;
            }
        }
        res.grid_sim_tpp.push_back(best_tpp);
        res.grid_sim_n.push_back(best_n);
        res.grid_sim_stderr.push_back(best_se);

        const OptimizationResult dbl = double_pooling_optimal_size(p);
        res.double_tpp.push_back(dbl.best_tpp);
        res.double_s.push_back(dbl.best_size);
    }
    return res;
}

StrategyFamily family_from_name(const std::string& name) {
    if (name == "individual") return StrategyFamily::individual;
    if (name == "dorfman" || name == "single") return StrategyFamily::dorfman;
    if (name == "tree") return StrategyFamily::tree;
    if (name == "grid2d" || name == "grid") return StrategyFamily::grid2d;
    if (name == "double") return StrategyFamily::double_pooling;
    throw validation_error(errc::malformed_input, "unknown strategy family: " + name);
}

const char* family_name(StrategyFamily family) {
    switch (family) {
        case StrategyFamily::individual: return "individual";
        case StrategyFamily::dorfman: return "dorfman";
        case StrategyFamily::tree: return "tree";
        case StrategyFamily::grid2d: return "grid2d";
        case StrategyFamily::double_pooling: return "double";
    }
    return "?";
}

std::vector<SweepRow> sweep(StrategyFamily family, const std::vector<double>& prevalences,
                            const std::vector<int>& sizes, int population, std::int64_t trials,
                            std::uint64_t master_seed, int threads) {
    std::vector<SweepRow> rows;
    std::size_t cell = 0;
    for (double pv : prevalences) {
        const Probability p(pv);
        for (int n : sizes) {
            SweepRow row;
            row.strategy = family_name(family);
            row.p = pv;
            row.n = n;
            row.population = population;
            switch (family) {
                case StrategyFamily::individual:
                    row.mean_tpp = 1.0;
                    row.mean_tests = population;
                    row.mean_rounds = 1.0;
                    break;
                case StrategyFamily::dorfman:
                    row.mean_tpp = n == 1 ? 1.0 : dorfman_tpp(p, PoolSize(n));
                    row.mean_tests = row.mean_tpp * population;
                    row.mean_rounds = n == 1 ? 1.0 : 2.0;
                    break;
                case StrategyFamily::grid2d:
                    row.mean_tpp = n == 1 ? 1.0 : grid2d_worstcase_tpp(p, PoolSize(n));
                    row.mean_tests = row.mean_tpp * population;
                    row.mean_rounds = n == 1 ? 1.0 : 2.0;
                    break;
                case StrategyFamily::double_pooling:
                    row.mean_tpp = n == 1 ? 1.0 : double_pooling_tpp(p, PoolSize(n));
                    row.mean_tests = row.mean_tpp * population;
                    row.mean_rounds = 2.0;
                    break;
                case StrategyFamily::tree: {
                    SimulationConfig cfg;
                    cfg.strategy = BinaryTreeSpec{n, true};
                    cfg.prevalence = pv;
                    cfg.population = population;
                    cfg.trials = trials;
                    cfg.master_seed = derive_seed(master_seed, 3000 + cell);
                    cfg.threads = threads;
                    const SimulationSummary s = simulate(cfg);
                    row.trials = trials;
                    row.mean_tests = s.mean_tests;
                    row.stderr_tests = s.stderr_tests;
                    row.mean_tpp = s.mean_tpp;
                    row.mean_rounds = s.mean_rounds;
                    break;
                }
            }
            rows.push_back(std::move(row));
            ++cell;
        }
    }
    return rows;
}

} // namespace poolkit
