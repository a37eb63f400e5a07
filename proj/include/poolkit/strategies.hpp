#ifndef POOLKIT_STRATEGIES_HPP
#define POOLKIT_STRATEGIES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "poolkit/model.hpp"

namespace poolkit {

// Side length of a square sample matrix (rows == columns == side).
class GridShape {
public:
    explicit GridShape(int side);
    int side() const noexcept { return side_; }
    int cells() const noexcept { return side_ * side_; }

private:
    int side_;
};

// Every strategy classifies all samples exactly (classifications always equal
// ground truth); they differ only in how many tests and rounds they spend.

// Tests every sample separately in one round.
StrategyOutcome run_individual(TestOracle& oracle);

// Dorfman pooling: consecutive pools of size n (final pool may be smaller);
// every member of a positive pool is retested individually in round 2.
StrategyOutcome run_single_pooling(TestOracle& oracle, PoolSize n);

// Recursive halving of positive pools over consecutive blocks of size n
// (ceil/floor split for odd sizes). With optimize=true the sibling rule is
// applied: after a positive parent the left child is tested first, and if it
// is negative the right sibling is known positive and is never pool-tested
// (a leaf sibling is classified positive with no test at all). Sequential
// sibling handling costs extra rounds.
StrategyOutcome run_binary_tree(TestOracle& oracle, PoolSize n, bool optimize);

// n x n matrix pooling over consecutive blocks of n^2 samples: round 1 tests
// n row pools and n column pools; candidates (positive-row x positive-column
// intersections) are retested individually unless logic already pins them
// (when only one row or only one column is positive, every candidate is
// necessarily positive). With optimize=true candidates are resolved in a
// fixed column-major order and a candidate is classified positive without a
// test whenever all other candidates in its column (or row) are known
// negative. Samples beyond the last full matrix fall back to single pooling
// at the Dorfman-optimal size for leftover_risk, or to individual tests when
// no risk is supplied.
StrategyOutcome run_grid2d(TestOracle& oracle, GridShape shape, bool optimize,
                           std::optional<Probability> leftover_risk = std::nullopt);

// Two pool partitions of size s tested in parallel; only patients whose two
// pools are both positive are retested individually. Partition A is the
// consecutive blocks; partition B is derived from partition_seed. When
// m = c*s with c >= s, partition B is built so that the two pools of any
// patient share no other member (which makes the closed-form TPP exact);
// otherwise it is a seeded uniform shuffle.
StrategyOutcome run_double_pooling(TestOracle& oracle, PoolSize s, std::uint64_t partition_seed);

// Partition B used by run_double_pooling, exposed for inspection and tests.
std::vector<std::vector<std::int32_t>> double_pooling_partition_b(int population, int pool_size,
                                                                  std::uint64_t seed);

// Value-typed strategy descriptors, used by the simulator, the brute-force
// expectation oracle, and the CLI.
struct IndividualSpec {};
struct SinglePoolingSpec {
    int pool = 1;
};
struct BinaryTreeSpec {
    int block = 1;
    bool optimize = true;
};
struct Grid2dSpec {
    int side = 2;
    bool optimize = true;
    std::optional<double> leftover_risk = std::nullopt;
};
struct DoublePoolingSpec {
    int pool = 1;
    std::uint64_t partition_seed = 0;
};

using StrategySpec =
    std::variant<IndividualSpec, SinglePoolingSpec, BinaryTreeSpec, Grid2dSpec, DoublePoolingSpec>;

std::string strategy_name(const StrategySpec& spec);

StrategyOutcome run_strategy(const StrategySpec& spec, TestOracle& oracle);
StrategyOutcome run_strategy(const StrategySpec& spec, const InfectionVector& vec);

} // namespace poolkit

#endif
