#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dmm/core.hpp"
#include "dmm/engine.hpp"
#include "dmm/scenario.hpp"

namespace dmm {

// Monte Carlo competitive-ratio estimate for one policy. cr is the ratio of
// sample means (equivalently of exact welfare sums), not a mean of
// per-trial ratios; stderr_cr is the delta-method standard error of that
// ratio.
struct CREstimate {
  PolicyId policy = PolicyId::kM1;
  int trials = 0;
  Money total_w_alg = 0;     // exact sum over trials
  Money total_w_oracle = 0;  // exact sum over trials
  double cr = 0;
  double stderr_cr = 0;
  std::uint64_t seed = 0;

  double mean_w_alg_dollars() const;
  double mean_w_oracle_dollars() const;
};

// One trial's outcomes across every compared policy. All policies and the
// oracle consume the identical realization (common random numbers), which
// the hash witnesses.
struct TrialRow {
  int trial = 0;
  std::uint64_t hash = 0;
  Money oracle_welfare = 0;
  std::vector<std::pair<PolicyId, WelfareBreakdown>> policy_results;
};

struct TrialBatch {
  std::vector<TrialRow> rows;
};

// Runs `trials` independent scenarios, feeding each one to every policy and
// the oracle. Throws std::invalid_argument for trials < 2 or a
// policy/config mismatch (M2 when mean arrivals fall below mean supply).
std::vector<CREstimate> estimate_cr(const ScenarioConfig& config,
                                    const std::vector<PolicyId>& policies, int trials,
                                    TrialBatch* batch = nullptr);

struct SweepRow {
  double lambda = 0;
  double sigma_combined = 0;  // recomputed from the lambda-scaled pmfs
  PolicyId policy = PolicyId::kM1;
  double cr = 0;
  double stderr_cr = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// Convergence sweep over variance scales. The grid must cover both
// endpoints 0 and 1. Trial sub-seeds are shared across grid points, so
// adjacent rows are positively correlated.
SweepResult co_sweep(const ScenarioConfig& base, const std::vector<double>& lambda_grid,
                     const std::vector<PolicyId>& policies, int trials);

// Ordinary least squares of (1 - cr) on sigma over one policy's sweep rows.
struct DeviationFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double intercept_stderr = 0;
  double r2 = 0;
};

// Throws std::invalid_argument with fewer than 3 rows for the policy or a
// degenerate (constant-sigma) design.
DeviationFit fit_deviation(const SweepResult& sweep, PolicyId policy);

}  // namespace dmm
