#ifndef POOLKIT_ANALYTIC_HPP
#define POOLKIT_ANALYTIC_HPP

#include <vector>

#include "poolkit/model.hpp"
#include "poolkit/strategies.hpp"

namespace poolkit {

// Outcome of an integer grid search over pool sizes. best_size == 1 means
// pooling cannot beat individual testing at this prevalence ("do not pool");
// its tests-per-patient is reported as exactly 1.0. Ties break toward the
// smaller size.
struct OptimizationResult {
    int best_size = 1;
    double best_tpp = 1.0;
    std::vector<std::pair<int, double>> profile; // every feasible size -> TPP

    bool pooling_effective() const { return best_size > 1; }
};

// Expected tests for Dorfman pooling of a population of m with pools of n:
// {(1-(1-p)^n)(n+1) + (1-p)^n} * m/n. The m/n factor is used as-is, without
// remainder correction; exact remainder handling lives in the executable
// strategy.
double dorfman_expected_tests(Probability p, PoolSize n, int population);

// Expected tests per patient for Dorfman pooling: 1 + 1/n - (1-p)^n.
double dorfman_tpp(Probability p, PoolSize n);

OptimizationResult dorfman_optimal_size(Probability p, PoolSize max_n = PoolSize(kMaxPoolSize));

// Worst-case expected tests for n x n matrix pooling, (2n + (p n^2)^2) m/n^2,
// where the worst case places every positive alone in its row and column.
// Requires n^2 <= m and p <= 1/n.
double grid2d_worstcase_tests(Probability p, PoolSize n, int population);

// Per-patient form of the above: 2/n + p^2 n^2 (no population needed).
double grid2d_worstcase_tpp(Probability p, PoolSize n);

// Largest prevalence for which worst-case matrix pooling still beats testing
// everyone individually: sqrt((n-2)/n^3). Requires n >= 2.
Probability grid2d_validity_bound(PoolSize n);

OptimizationResult grid2d_optimal_size(Probability p, int population,
                                       PoolSize max_n = PoolSize(kMaxPoolSize));

// Expected tests per patient for double pooling with pools of s:
// 2/s + p + (1-p)(1-(1-p)^{s-1})^2. Two pool tests per s patients, plus an
// individual retest when both of a patient's pools are positive (the patient
// is positive, or each pool holds an independent other positive).
double double_pooling_tpp(Probability p, PoolSize s);

OptimizationResult double_pooling_optimal_size(Probability p,
                                               PoolSize max_s = PoolSize(kMaxPoolSize));

// Exact expected tests for any executable strategy by enumerating all 2^m
// infection outcomes of a population of m samples, weighting each by
// p^k (1-p)^(m-k). Rejects m > 12.
double brute_force_expected_tests(const StrategySpec& spec, Probability p, int population);

} // namespace poolkit

#endif
