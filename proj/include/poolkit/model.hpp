#ifndef POOLKIT_MODEL_HPP
#define POOLKIT_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "poolkit/errors.hpp"

namespace poolkit {

// Hard upper limit on how many samples may share one pooled assay.
inline constexpr int kMaxPoolSize = 32;

// A probability (prevalence or per-patient risk), validated to [0, 1].
class Probability {
public:
    explicit Probability(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

// Number of samples combined into one pool, validated to [1, kMaxPoolSize].
class PoolSize {
public:
    explicit PoolSize(int value);
    int value() const noexcept { return value_; }

private:
    int value_;
};

// Ground-truth positive/negative status for an ordered set of samples.
// Immutable once constructed.
class InfectionVector {
public:
    explicit InfectionVector(std::vector<std::uint8_t> statuses);

    int size() const noexcept { return static_cast<int>(statuses_.size()); }
    bool positive(int i) const { return statuses_[static_cast<std::size_t>(i)] != 0; }
    int count_positives() const;
    std::span<const std::uint8_t> statuses() const noexcept { return statuses_; }

private:
    std::vector<std::uint8_t> statuses_;
};

// Draws m independent Bernoulli(p) statuses. Deterministic for a fixed seed.
InfectionVector sample_infection_vector(Probability p, int population, std::uint64_t seed);

// Probability that a pool of n samples, each positive independently with
// probability p, tests negative: (1-p)^n.
Probability pool_negative_probability(Probability p, PoolSize n);

// Perfect pooled-test oracle over one infection vector. A pooled test over a
// subset returns true iff at least one member is positive. The oracle counts
// tests, the round index of each test, and per-sample participation. It is
// confined to a single strategy execution and must not be shared between
// concurrent executions.
class TestOracle {
public:
    explicit TestOracle(const InfectionVector& vec, int max_pool = kMaxPoolSize);

    // Issues one pooled test in the given round (rounds are 1-based; a round
    // is a batch of tests with no result dependencies among them).
    bool test(std::span<const std::int32_t> pool, int round);

    std::int64_t tests_issued() const noexcept { return tests_; }
    int rounds_used() const noexcept { return max_round_; }
    int population() const noexcept { return vec_->size(); }
    const InfectionVector& infections() const noexcept { return *vec_; }

    std::span<const std::int32_t> participation() const noexcept { return participation_; }
    int max_participation() const;
    // Samples that appear in two or more tests, i.e. whose physical sample
    // would have to be split into aliquots up front.
    std::int64_t samples_in_multiple_tests() const;
    // Sum of pool sizes over all issued tests; equals the sum of the
    // participation counters by construction.
    std::int64_t total_pool_members() const noexcept { return total_pool_members_; }

private:
    const InfectionVector* vec_;
    int max_pool_;
    std::int64_t tests_ = 0;
    int max_round_ = 0;
    std::int64_t total_pool_members_ = 0;
    std::vector<std::int32_t> participation_;
};

// Free-function form of TestOracle::test.
bool pooled_test(TestOracle& oracle, std::span<const std::int32_t> pool, int round = 1);

// Result of executing one pooling strategy to completion.
struct StrategyOutcome {
    std::int64_t tests = 0;
    int rounds = 0;
    int max_participation = 0;
    std::int64_t duplicated_samples = 0; // samples appearing in >= 2 tests
    std::vector<std::uint8_t> classifications;

    bool matches(const InfectionVector& vec) const;
};

} // namespace poolkit

#endif
