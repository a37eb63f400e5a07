#ifndef POOLKIT_COHORT_HPP
#define POOLKIT_COHORT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "poolkit/analytic.hpp"
#include "poolkit/simulator.hpp"

namespace poolkit {

struct Patient {
    std::string id;
    double risk = 0.0;
};

using Cohort = std::vector<Patient>;

// Parses the patients file format: header "patient_id,risk", one record per
// line, risk a decimal in [0,1]. LF and CRLF both accepted. Rejections carry
// the 1-based line number.
Cohort load_patients(std::istream& in);

// Monotone cumulative distribution of risk scores, given as breakpoints
// (risk, cumulative fraction). The first breakpoint carries an atom of its
// full fraction; between breakpoints mass is spread linearly.
class RiskCdf {
public:
    explicit RiskCdf(std::vector<std::pair<double, double>> points);

    // Inverse CDF at u in [0,1).
    double quantile(double u) const;
    const std::vector<std::pair<double, double>>& points() const { return points_; }

private:
    std::vector<std::pair<double, double>> points_;
};

// Parses the CDF file format: header "risk,cum_fraction", rows sorted by
// strictly increasing risk, fractions non-decreasing and ending at 1.
RiskCdf load_cdf(std::istream& in);

// Draws a synthetic cohort of m patients whose risks follow the CDF.
Cohort sample_cohort(const RiskCdf& cdf, int population, std::uint64_t seed);

// Simulation-backed tests-per-patient estimates for the strategies without a
// closed form, memoized over a 0.01-step prevalence grid and interpolated
// linearly in between. Deterministic for a fixed seed.
class TppModel {
public:
    struct Params {
        std::int64_t trials = 20000;
        std::uint64_t seed = 0x9D0DE5ULL;
        int threads = 0;
    };
    explicit TppModel(Params params = {}) : params_(params) {}

    double tree_tpp(double p, int block);
    double grid2d_tpp(double p, int side);
    // Best block size for the multi-stage strategy, searched over the
    // power-of-two sizes; size 1 means do not pool.
    OptimizationResult tree_optimal(double p);

private:
    double cell(bool grid, int n, int k);

    Params params_;
    std::map<std::tuple<bool, int, int>, double> cache_;
};

enum class RiskEstimator { mean, max };

struct PartitionOptions {
    int max_pool = kMaxPoolSize;
    double max_risk_spread = 0.05; // pooled groups never span a wider risk range
    bool sort_by_risk = true;      // disable to plan in input order (baseline)
    RiskEstimator estimator = RiskEstimator::mean;
};

struct PlanGroup {
    std::vector<std::int32_t> members; // indices into the cohort
    StrategyFamily strategy = StrategyFamily::individual;
    int pool_size = 1; // pool/block size; matrix side for grid2d
    double risk_estimate = 0.0;
    double expected_tpp = 1.0;
};

struct PoolingPlan {
    StrategyFamily family = StrategyFamily::individual;
    std::vector<PlanGroup> groups;
    double expected_tests = 0.0;
    double expected_tpp = 0.0;
    int worst_case_rounds = 1;
    std::vector<std::int32_t> duplication; // patients whose samples need splitting
};

// Sorts the cohort by risk (stable), walks it greedily, and closes each block
// at the family optimizer's preferred size for the block's running risk
// estimate. Blocks that cannot fill a matrix (grid2d) or a full double-pool
// square fall back to Dorfman pooling; blocks whose optimal size is 1 are
// tested individually.
PoolingPlan make_plan(const Cohort& cohort, StrategyFamily family, const PartitionOptions& options,
                      TppModel& model);
PoolingPlan make_plan(const Cohort& cohort, StrategyFamily family,
                      const PartitionOptions& options = {});

double plan_expected_tpp(const PoolingPlan& plan);

// Samples every patient's status from their own risk and executes each
// group's strategy, `trials` times. Mean TPP converges to the plan estimate
// when groups are risk-homogeneous.
SimulationSummary evaluate_plan(const PoolingPlan& plan, const Cohort& cohort,
                                std::int64_t trials, std::uint64_t seed, int threads = 0);

void write_plan_csv(std::ostream& out, const PoolingPlan& plan, const Cohort& cohort);

} // namespace poolkit

#endif
