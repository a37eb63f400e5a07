#include "poolkit/model.hpp"

#include <algorithm>
#include <cmath>

#include "poolkit/rng.hpp"

namespace poolkit {

Probability::Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw validation_error(errc::invalid_probability,
                               "probability must lie in [0,1], got " + std::to_string(value));
    }
}

PoolSize::PoolSize(int value) : value_(value) {
    if (value < 1 || value > kMaxPoolSize) {
        throw validation_error(errc::invalid_pool_size,
                               "pool size must lie in [1," + std::to_string(kMaxPoolSize) +
                                   "], got " + std::to_string(value));
    }
}

InfectionVector::InfectionVector(std::vector<std::uint8_t> statuses)
    : statuses_(std::move(statuses)) {}

int InfectionVector::count_positives() const {
    return static_cast<int>(std::count_if(statuses_.begin(), statuses_.end(),
                                          [](std::uint8_t s) { return s != 0; }));
}

InfectionVector sample_infection_vector(Probability p, int population, std::uint64_t seed) {
    if (population < 1) {
        throw validation_error(errc::invalid_population,
                               "population must be >= 1, got " + std::to_string(population));
    }
    SplitMix64 rng(seed);
    std::vector<std::uint8_t> statuses(static_cast<std::size_t>(population));
    for (auto& s : statuses) s = rng.bernoulli(p.value()) ? 1 : 0;
    return InfectionVector(std::move(statuses));
}

Probability pool_negative_probability(Probability p, PoolSize n) {
    return Probability(std::pow(1.0 - p.value(), n.value()));
}

TestOracle::TestOracle(const InfectionVector& vec, int max_pool)
    : vec_(&vec),
      max_pool_(std::min(max_pool, kMaxPoolSize)),
      participation_(static_cast<std::size_t>(vec.size()), 0) {
    if (max_pool < 1) {
        throw validation_error(errc::invalid_pool_size, "max_pool must be >= 1");
    }
}

bool TestOracle::test(std::span<const std::int32_t> pool, int round) {
    if (pool.empty()) {
        throw validation_error(errc::empty_pool, "pooled test over empty subset");
    }
    if (static_cast<int>(pool.size()) > max_pool_) {
        throw validation_error(errc::pool_too_large,
                               "pool of " + std::to_string(pool.size()) + " exceeds limit of " +
                                   std::to_string(max_pool_));
    }
    bool any_positive = false;
    for (std::int32_t i : pool) {
        if (i < 0 || i >= vec_->size()) {
            throw validation_error(errc::index_out_of_range,
                                   "sample index " + std::to_string(i) + " outside population");
        }
    }
    // Validate the whole subset before mutating any counter.
    for (std::int32_t i : pool) {
        ++participation_[static_cast<std::size_t>(i)];
        any_positive = any_positive || vec_->positive(i);
    }
    ++tests_;
    total_pool_members_ += static_cast<std::int64_t>(pool.size());
    max_round_ = std::max(max_round_, round);
    return any_positive;
}

int TestOracle::max_participation() const {
    if (participation_.empty()) return 0;
    return *std::max_element(participation_.begin(), participation_.end());
}

std::int64_t TestOracle::samples_in_multiple_tests() const {
    return std::count_if(participation_.begin(), participation_.end(),
                         [](std::int32_t c) { return c >= 2; });
}

bool pooled_test(TestOracle& oracle, std::span<const std::int32_t> pool, int round) {
    return oracle.test(pool, round);
}

bool StrategyOutcome::matches(const InfectionVector& vec) const {
    if (static_cast<int>(classifications.size()) != vec.size()) return false;
    for (int i = 0; i < vec.size(); ++i) {
        if ((classifications[static_cast<std::size_t>(i)] != 0) != vec.positive(i)) return false;
    }
    return true;
}

} // namespace poolkit
