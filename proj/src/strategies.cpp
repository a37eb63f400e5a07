#include "poolkit/strategies.hpp"

#include <algorithm>
#include <numeric>

#include "poolkit/analytic.hpp"
#include "poolkit/rng.hpp"

namespace poolkit {

namespace {

std::vector<std::int32_t> make_range(int lo, int hi) {
    std::vector<std::int32_t> v(static_cast<std::size_t>(hi - lo));
    std::iota(v.begin(), v.end(), lo);
    return v;
}

StrategyOutcome finish(TestOracle& oracle, std::vector<std::uint8_t> klass) {
    StrategyOutcome out;
    out.tests = oracle.tests_issued();
    out.rounds = oracle.rounds_used();
    out.max_participation = oracle.max_participation();
    out.duplicated_samples = oracle.samples_in_multiple_tests();
    out.classifications = std::move(klass);
    return out;
}

// Resolves a subtree [lo,hi) that is known to contain at least one positive.
// resolved_round is the round in which that knowledge became available.
void tree_descend(TestOracle& oracle, std::vector<std::uint8_t>& klass, int lo, int hi,
                  int resolved_round, bool optimize) {
    const int size = hi - lo;
    if (size == 1) {
        klass[static_cast<std::size_t>(lo)] = 1;
        return;
    }
    const int mid = lo + (size + 1) / 2;
    const auto left = make_range(lo, mid);
    const auto right = make_range(mid, hi);
    if (!optimize) {
        const int r = resolved_round + 1;
        const bool left_pos = oracle.test(left, r);
        const bool right_pos = oracle.test(right, r);
        if (left_pos) tree_descend(oracle, klass, lo, mid, r, optimize);
        if (right_pos) tree_descend(oracle, klass, mid, hi, r, optimize);
        return;
    }
    // Sibling rule: test the left (lower-index) half first. A negative left
    // half pins the right half positive with no test; a positive left half
    // leaves the right half unknown, so it is tested one round later.
    const int left_round = resolved_round + 1;
    const bool left_pos = oracle.test(left, left_round);
    if (!left_pos) {
        tree_descend(oracle, klass, mid, hi, left_round, optimize);
        return;
    }
    tree_descend(oracle, klass, lo, mid, left_round, optimize);
    const int right_round = left_round + 1;
    if (oracle.test(right, right_round)) {
        tree_descend(oracle, klass, mid, hi, right_round, optimize);
    }
}

// Dorfman retest of samples [lo,hi) using pools of the given size, issuing
// pool tests in pool_round and retests in pool_round+1. Appends into klass.
void single_pooling_block(TestOracle& oracle, std::vector<std::uint8_t>& klass, int lo, int hi,
                          int pool_size, int pool_round) {
    for (int start = lo; start < hi; start += pool_size) {
        const int end = std::min(start + pool_size, hi);
        const auto pool = make_range(start, end);
        if (!oracle.test(pool, pool_round)) continue;
        for (int i = start; i < end; ++i) {
            const std::int32_t one[] = {i};
            klass[static_cast<std::size_t>(i)] = oracle.test(one, pool_round + 1) ? 1 : 0;
        }
    }
}

} // namespace

GridShape::GridShape(int side) : side_(side) {
    if (side < 2) {
        throw validation_error(errc::grid_side_too_small,
                               "matrix side must be >= 2, got " + std::to_string(side));
    }
    PoolSize check(side); // reuse the pool-size bound: rows and columns are pools
    (void)check;
}

StrategyOutcome run_individual(TestOracle& oracle) {
    const int m = oracle.population();
    std::vector<std::uint8_t> klass(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
        const std::int32_t one[] = {i};
        klass[static_cast<std::size_t>(i)] = oracle.test(one, 1) ? 1 : 0;
    }
    return finish(oracle, std::move(klass));
}

StrategyOutcome run_single_pooling(TestOracle& oracle, PoolSize n) {
    const int m = oracle.population();
    std::vector<std::uint8_t> klass(static_cast<std::size_t>(m), 0);
    single_pooling_block(oracle, klass, 0, m, n.value(), 1);
    return finish(oracle, std::move(klass));
}

StrategyOutcome run_binary_tree(TestOracle& oracle, PoolSize n, bool optimize) {
    const int m = oracle.population();
    std::vector<std::uint8_t> klass(static_cast<std::size_t>(m), 0);
    for (int lo = 0; lo < m; lo += n.value()) {
        const int hi = std::min(lo + n.value(), m);
        if (oracle.test(make_range(lo, hi), 1)) {
            tree_descend(oracle, klass, lo, hi, 1, optimize);
        }
    }
    return finish(oracle, std::move(klass));
}

namespace {

// One n x n matrix anchored at sample index `base`.
void grid2d_block(TestOracle& oracle, std::vector<std::uint8_t>& klass, int base, int n,
                  bool optimize) {
    std::vector<std::int32_t> rows_pos, cols_pos;
    std::vector<std::int32_t> pool(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) pool[static_cast<std::size_t>(c)] = base + r * n + c;
        if (oracle.test(pool, 1)) rows_pos.push_back(r);
    }
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) pool[static_cast<std::size_t>(r)] = base + r * n + c;
        if (oracle.test(pool, 1)) cols_pos.push_back(c);
    }
    if (rows_pos.empty()) return;

    const auto at = [&](int r, int c) { return base + r * n + c; };
    const int nr = static_cast<int>(rows_pos.size());
    const int nc = static_cast<int>(cols_pos.size());

    // With a single positive row (or column) every candidate is the only
    // possible explanation of its column (row) and is positive by necessity.
    if (nr == 1 || nc == 1) {
        for (int r : rows_pos)
            for (int c : cols_pos) klass[static_cast<std::size_t>(at(r, c))] = 1;
        return;
    }

    if (!optimize) {
        for (int r : rows_pos) {
            for (int c : cols_pos) {
                const std::int32_t one[] = {at(r, c)};
                klass[static_cast<std::size_t>(at(r, c))] = oracle.test(one, 2) ? 1 : 0;
            }
        }
        return;
    }

    // Candidate grid indexed by (row rank, column rank). States: unknown,
    // tested/inferred negative, tested/inferred positive.
    enum : std::uint8_t { kUnknown = 0, kNeg = 1, kPos = 2 };
    std::vector<std::uint8_t> state(static_cast<std::size_t>(nr * nc), kUnknown);
    const auto st = [&](int ri, int ci) -> std::uint8_t& {
        return state[static_cast<std::size_t>(ri * nc + ci)];
    };

    // Round 2: every candidate that is neither the last of its column nor the
    // last of its row. The deferred cells are resolvable by the two inference
    // rules once these results are in.
    for (int ri = 0; ri < nr - 1; ++ri) {
        for (int ci = 0; ci < nc - 1; ++ci) {
            const std::int32_t one[] = {at(rows_pos[static_cast<std::size_t>(ri)],
                                           cols_pos[static_cast<std::size_t>(ci)])};
            st(ri, ci) = oracle.test(one, 2) ? kPos : kNeg;
        }
    }

    // Inference: a still-unknown candidate is positive when all other
    // candidates in its column are negative (the column pool needs an
    // explanation), and symmetrically for its row. One pass suffices since
    // inference only ever adds positives.
    for (int ci = 0; ci < nc; ++ci) {
        for (int ri = 0; ri < nr; ++ri) {
            if (st(ri, ci) != kUnknown) continue;
            bool col_rest_negative = true;
            for (int k = 0; k < nr; ++k)
                if (k != ri && st(k, ci) != kNeg) { col_rest_negative = false; break; }
            bool row_rest_negative = true;
            for (int k = 0; k < nc; ++k)
                if (k != ci && st(ri, k) != kNeg) { row_rest_negative = false; break; }
            if (col_rest_negative || row_rest_negative) st(ri, ci) = kPos;
        }
    }

    // Round 3: whatever inference could not pin down.
    for (int ri = 0; ri < nr; ++ri) {
        for (int ci = 0; ci < nc; ++ci) {
            if (st(ri, ci) != kUnknown) continue;
            const std::int32_t one[] = {at(rows_pos[static_cast<std::size_t>(ri)],
                                           cols_pos[static_cast<std::size_t>(ci)])};
            st(ri, ci) = oracle.test(one, 3) ? kPos : kNeg;
        }
    }

    for (int ri = 0; ri < nr; ++ri) {
        for (int ci = 0; ci < nc; ++ci) {
            if (st(ri, ci) == kPos) {
                klass[static_cast<std::size_t>(at(rows_pos[static_cast<std::size_t>(ri)],
                                                  cols_pos[static_cast<std::size_t>(ci)]))] = 1;
            }
        }
    }
}

} // namespace

StrategyOutcome run_grid2d(TestOracle& oracle, GridShape shape, bool optimize,
                           std::optional<Probability> leftover_risk) {
    const int m = oracle.population();
    const int n = shape.side();
    const int cells = shape.cells();
    if (cells > m) {
        throw validation_error(errc::grid_exceeds_population,
                               "matrix of " + std::to_string(cells) + " cells exceeds population " +
                                   std::to_string(m));
    }
    std::vector<std::uint8_t> klass(static_cast<std::size_t>(m), 0);
    int base = 0;
    for (; base + cells <= m; base += cells) {
        grid2d_block(oracle, klass, base, n, optimize);
    }
    if (base < m) {
        int fallback_pool = 1;
        if (leftover_risk) {
            fallback_pool = dorfman_optimal_size(*leftover_risk).best_size;
        }
        if (fallback_pool <= 1) {
            for (int i = base; i < m; ++i) {
                const std::int32_t one[] = {i};
                klass[static_cast<std::size_t>(i)] = oracle.test(one, 1) ? 1 : 0;
            }
        } else {
            single_pooling_block(oracle, klass, base, m, fallback_pool, 1);
        }
    }
    return finish(oracle, std::move(klass));
}

std::vector<std::vector<std::int32_t>> double_pooling_partition_b(int population, int pool_size,
                                                                  std::uint64_t seed) {
    const int m = population;
    const int s = pool_size;
    std::vector<std::vector<std::int32_t>> blocks;
    SplitMix64 rng(seed);
    const int c = m / s;
    if (m % s == 0 && c >= s) {
        // Arrange samples as c rows of s (the partition-A blocks). Each B pool
        // takes one sample from s distinct rows, so the two pools of any
        // sample intersect in that sample alone.
        std::vector<std::int32_t> rho(static_cast<std::size_t>(c));
        std::iota(rho.begin(), rho.end(), 0);
        for (int i = c - 1; i > 0; --i) {
            std::swap(rho[static_cast<std::size_t>(i)],
                      rho[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
        }
        std::vector<std::vector<std::int32_t>> tau(static_cast<std::size_t>(c));
        for (int r = 0; r < c; ++r) {
            auto& t = tau[static_cast<std::size_t>(r)];
            t.resize(static_cast<std::size_t>(s));
            std::iota(t.begin(), t.end(), 0);
            for (int i = s - 1; i > 0; --i) {
                std::swap(t[static_cast<std::size_t>(i)],
                          t[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
            }
        }
        blocks.resize(static_cast<std::size_t>(c));
        for (int i = 0; i < c; ++i) {
            auto& blk = blocks[static_cast<std::size_t>(i)];
            blk.reserve(static_cast<std::size_t>(s));
            for (int j = 0; j < s; ++j) {
                const int row = rho[static_cast<std::size_t>((i + j) % c)];
                blk.push_back(row * s + tau[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)]);
            }
        }
        return blocks;
    }
    // Uniform shuffle fallback; pools may share more than one sample.
    std::vector<std::int32_t> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = m - 1; i > 0; --i) {
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
    }
    for (int start = 0; start < m; start += s) {
        const int end = std::min(start + s, m);
        blocks.emplace_back(perm.begin() + start, perm.begin() + end);
    }
    return blocks;
}

StrategyOutcome run_double_pooling(TestOracle& oracle, PoolSize s, std::uint64_t partition_seed) {
    const int m = oracle.population();
    std::vector<std::uint8_t> klass(static_cast<std::size_t>(m), 0);
    if (m == 0) return finish(oracle, std::move(klass));

    std::vector<std::uint8_t> pos_a(static_cast<std::size_t>(m), 0);
    std::vector<std::uint8_t> pos_b(static_cast<std::size_t>(m), 0);
    for (int start = 0; start < m; start += s.value()) {
        const int end = std::min(start + s.value(), m);
        const bool pos = oracle.test(make_range(start, end), 1);
        for (int i = start; i < end; ++i) pos_a[static_cast<std::size_t>(i)] = pos ? 1 : 0;
    }
    for (const auto& blk : double_pooling_partition_b(m, s.value(), partition_seed)) {
        const bool pos = oracle.test(blk, 1);
        for (std::int32_t i : blk) pos_b[static_cast<std::size_t>(i)] = pos ? 1 : 0;
    }
    for (int i = 0; i < m; ++i) {
        if (pos_a[static_cast<std::size_t>(i)] && pos_b[static_cast<std::size_t>(i)]) {
            const std::int32_t one[] = {i};
            klass[static_cast<std::size_t>(i)] = oracle.test(one, 2) ? 1 : 0;
        }
    }
    return finish(oracle, std::move(klass));
}

std::string strategy_name(const StrategySpec& spec) {
    struct Visitor {
        std::string operator()(const IndividualSpec&) const { return "individual"; }
        std::string operator()(const SinglePoolingSpec&) const { return "dorfman"; }
        std::string operator()(const BinaryTreeSpec&) const { return "tree"; }
        std::string operator()(const Grid2dSpec&) const { return "grid2d"; }
        std::string operator()(const DoublePoolingSpec&) const { return "double"; }
    };
    return std::visit(Visitor{}, spec);
}

StrategyOutcome run_strategy(const StrategySpec& spec, TestOracle& oracle) {
    struct Visitor {
        TestOracle& oracle;
        StrategyOutcome operator()(const IndividualSpec&) const { return run_individual(oracle); }
        StrategyOutcome operator()(const SinglePoolingSpec& s) const {
            return run_single_pooling(oracle, PoolSize(s.pool));
        }
        StrategyOutcome operator()(const BinaryTreeSpec& s) const {
            return run_binary_tree(oracle, PoolSize(s.block), s.optimize);
        }
        StrategyOutcome operator()(const Grid2dSpec& s) const {
            std::optional<Probability> risk;
            if (s.leftover_risk) risk = Probability(*s.leftover_risk);
            return run_grid2d(oracle, GridShape(s.side), s.optimize, risk);
        }
        StrategyOutcome operator()(const DoublePoolingSpec& s) const {
            return run_double_pooling(oracle, PoolSize(s.pool), s.partition_seed);
        }
    };
    return std::visit(Visitor{oracle}, spec);
}

StrategyOutcome run_strategy(const StrategySpec& spec, const InfectionVector& vec) {
    TestOracle oracle(vec);
    return run_strategy(spec, oracle);
}

} // namespace poolkit
