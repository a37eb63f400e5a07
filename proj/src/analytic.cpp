#include "poolkit/analytic.hpp"

#include <cmath>

namespace poolkit {

namespace {

OptimizationResult search_sizes(int max_size, double (*tpp)(double, int), double p) {
    OptimizationResult res;
    res.profile.reserve(static_cast<std::size_t>(max_size));
    res.profile.emplace_back(1, 1.0); // size 1 == individual testing
    res.best_size = 1;
    res.best_tpp = 1.0;
    for (int n = 2; n <= max_size; ++n) {
        const double v = tpp(p, n);
        res.profile.emplace_back(n, v);
        if (v < res.best_tpp) {
            res.best_tpp = v;
            res.best_size = n;
        }
    }
    return res;
}

} // namespace

double dorfman_expected_tests(Probability p, PoolSize n, int population) {
    if (population < 1) {
        throw validation_error(errc::invalid_population, "population must be >= 1");
    }
    const double q = std::pow(1.0 - p.value(), n.value());
    return ((1.0 - q) * (n.value() + 1) + q) * static_cast<double>(population) / n.value();
}

double dorfman_tpp(Probability p, PoolSize n) {
    return 1.0 + 1.0 / n.value() - std::pow(1.0 - p.value(), n.value());
}

OptimizationResult dorfman_optimal_size(Probability p, PoolSize max_n) {
    return search_sizes(max_n.value(),
                        [](double pv, int n) { return dorfman_tpp(Probability(pv), PoolSize(n)); },
                        p.value());
}

double grid2d_worstcase_tpp(Probability p, PoolSize n) {
    const double pn = p.value() * n.value();
    return 2.0 / n.value() + pn * pn;
}

double grid2d_worstcase_tests(Probability p, PoolSize n, int population) {
    if (static_cast<std::int64_t>(n.value()) * n.value() > population) {
        throw validation_error(errc::grid_exceeds_population,
                               "need n^2 <= population for an n x n matrix");
    }
    if (p.value() > 1.0 / n.value()) {
        throw validation_error(errc::prevalence_above_grid_limit,
                               "worst-case formula requires p <= 1/n");
    }
    return grid2d_worstcase_tpp(p, n) * static_cast<double>(population);
}

Probability grid2d_validity_bound(PoolSize n) {
    if (n.value() < 2) {
        throw validation_error(errc::grid_side_too_small, "validity bound requires n >= 2");
    }
    const double nv = n.value();
    return Probability(std::sqrt((nv - 2.0) / (nv * nv * nv)));
}

OptimizationResult grid2d_optimal_size(Probability p, int population, PoolSize max_n) {
    OptimizationResult res;
    res.best_size = 1;
    res.best_tpp = 1.0;
    for (int n = 2; n <= max_n.value() && n * n <= population; ++n) {
        if (p.value() >= grid2d_validity_bound(PoolSize(n)).value()) continue;
        const double v = grid2d_worstcase_tpp(p, PoolSize(n));
        res.profile.emplace_back(n, v);
        if (v < res.best_tpp) {
            res.best_tpp = v;
            res.best_size = n;
        }
    }
    return res;
}

double double_pooling_tpp(Probability p, PoolSize s) {
    const double q = 1.0 - p.value();
    const double other = 1.0 - std::pow(q, s.value() - 1);
    return 2.0 / s.value() + p.value() + q * other * other;
}

OptimizationResult double_pooling_optimal_size(Probability p, PoolSize max_s) {
    return search_sizes(max_s.value(),
                        [](double pv, int s) {
                            return double_pooling_tpp(Probability(pv), PoolSize(s));
                        },
                        p.value());
}

double brute_force_expected_tests(const StrategySpec& spec, Probability p, int population) {
    if (population < 1 || population > 12) {
        throw validation_error(errc::enumeration_too_large,
                               "brute force enumerates 2^m outcomes; need 1 <= m <= 12");
    }
    // Weight tables by positive count, built by repeated multiplication.
    std::vector<double> pow_p(static_cast<std::size_t>(population) + 1, 1.0);
    std::vector<double> pow_q(static_cast<std::size_t>(population) + 1, 1.0);
    for (int k = 1; k <= population; ++k) {
        pow_p[static_cast<std::size_t>(k)] = pow_p[static_cast<std::size_t>(k - 1)] * p.value();
        pow_q[static_cast<std::size_t>(k)] =
            pow_q[static_cast<std::size_t>(k - 1)] * (1.0 - p.value());
    }
    double expected = 0.0;
    const std::uint32_t outcomes = 1u << population;
    std::vector<std::uint8_t> statuses(static_cast<std::size_t>(population));
    for (std::uint32_t mask = 0; mask < outcomes; ++mask) {
        int positives = 0;
        for (int i = 0; i < population; ++i) {
            const bool pos = (mask >> i) & 1u;
            statuses[static_cast<std::size_t>(i)] = pos ? 1 : 0;
            positives += pos ? 1 : 0;
        }
        const double weight = pow_p[static_cast<std::size_t>(positives)] *
                              pow_q[static_cast<std::size_t>(population - positives)];
        if (weight == 0.0) continue;
        const InfectionVector vec(statuses);
        expected += weight * static_cast<double>(run_strategy(spec, vec).tests);
    }
    return expected;
}

} // namespace poolkit
