#include "dmm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dmm/oracle.hpp"

namespace dmm {

double CREstimate::mean_w_alg_dollars() const {
  return money_to_dollars(total_w_alg) / trials;
}

double CREstimate::mean_w_oracle_dollars() const {
  return money_to_dollars(total_w_oracle) / trials;
}

namespace {

// Delta-method standard error of the ratio of sample means x_bar / y_bar.
double ratio_stderr(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0;
  double mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  if (mean_y == 0) return 0;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mean_x) * (x[i] - mean_x);
    syy += (y[i] - mean_y) * (y[i] - mean_y);
    sxy += (x[i] - mean_x) * (y[i] - mean_y);
  }
  sxx /= n - 1;
  syy /= n - 1;
  sxy /= n - 1;
  const double r = mean_x / mean_y;
  const double var = (sxx - 2 * r * sxy + r * r * syy) / n;
  return var > 0 ? std::sqrt(var) / std::abs(mean_y) : 0.0;
}

}  // namespace

std::vector<CREstimate> estimate_cr(const ScenarioConfig& config,
                                    const std::vector<PolicyId>& policies, int trials,
                                    TrialBatch* batch) {
  if (trials < 2) {
    throw std::invalid_argument("estimate_cr: trials must be >= 2, got " +
                                std::to_string(trials));
  }
  if (policies.empty()) {
    throw std::invalid_argument("estimate_cr: no policies given");
  }
  const MomentSummary m = scaled_moments(config);
  for (PolicyId policy : policies) {
    if (policy_needs_surplus_arrivals(policy) && m.mu_n < m.mu_s) {
      throw std::invalid_argument("estimate_cr: policy " + policy_name(policy) +
                                  " requires mu_n >= mu_s (config has mu_n=" +
                                  std::to_string(m.mu_n) + ", mu_s=" + std::to_string(m.mu_s) +
                                  ")");
    }
  }

  const std::size_t n_policies = policies.size();
  std::vector<Money> sum_alg(n_policies, 0);
  Money sum_oracle = 0;
  std::vector<std::vector<double>> w_alg(n_policies);  // dollars, for stderr
  std::vector<double> w_oracle;
  for (auto& v : w_alg) v.reserve(trials);
  w_oracle.reserve(trials);
  if (batch) batch->rows.clear();

  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t sub_seed = trial_seed(config.seed, trial);
    const Realization r =
        sample_realization(config, StreamSeeds{sub_seed, sub_seed, sub_seed});

    try {
      const WelfareBreakdown oracle = oracle_solve(r);
      sum_oracle += oracle.total;
      w_oracle.push_back(money_to_dollars(oracle.total));

      TrialRow row;
      if (batch) {
        row.trial = trial;
        row.hash = realization_hash(r);
        row.oracle_welfare = oracle.total;
      }
      for (std::size_t pi = 0; pi < n_policies; ++pi) {
        WelfareBreakdown b = run_online(policies[pi], r, m);
        sum_alg[pi] += b.total;
        w_alg[pi].push_back(money_to_dollars(b.total));
        if (batch) row.policy_results.emplace_back(policies[pi], std::move(b));
      }
      if (batch) batch->rows.push_back(std::move(row));
    } catch (const std::logic_error& e) {
      throw std::runtime_error("estimate_cr: invariant violation in trial " +
                               std::to_string(trial) + " (sub-seed " +
                               std::to_string(sub_seed) + " of seed " +
                               std::to_string(config.seed) + "): " + e.what());
    }
  }

  std::vector<CREstimate> out;
  out.reserve(n_policies);
  for (std::size_t pi = 0; pi < n_policies; ++pi) {
    CREstimate est;
    est.policy = policies[pi];
    est.trials = trials;
    est.total_w_alg = sum_alg[pi];
    est.total_w_oracle = sum_oracle;
    est.seed = config.seed;
    if (sum_oracle != 0) {
      est.cr = static_cast<double>(sum_alg[pi]) / static_cast<double>(sum_oracle);
      est.stderr_cr = ratio_stderr(w_alg[pi], w_oracle);
    } else if (sum_alg[pi] == 0) {
      est.cr = 1.0;  // nothing to serve: both welfares are identically zero
      est.stderr_cr = 0.0;
    } else {
      throw std::runtime_error("estimate_cr: oracle welfare sums to zero but policy " +
                               policy_name(policies[pi]) + " does not");
    }
    out.push_back(est);
  }
  return out;
}

SweepResult co_sweep(const ScenarioConfig& base, const std::vector<double>& lambda_grid,
                     const std::vector<PolicyId>& policies, int trials) {
  const auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
  const bool has_zero = std::any_of(lambda_grid.begin(), lambda_grid.end(),
                                    [&](double l) { return near(l, 0.0); });
  const bool has_one = std::any_of(lambda_grid.begin(), lambda_grid.end(),
                                   [&](double l) { return near(l, 1.0); });
  if (!has_zero || !has_one) {
    throw std::invalid_argument("co_sweep: lambda grid must include both 0 and 1");
  }

  SweepResult result;
  for (double lambda : lambda_grid) {
    ScenarioConfig config = base;
    config.lambda = lambda;
    const double sigma = scaled_moments(config).sigma_combined;
    for (const CREstimate& est : estimate_cr(config, policies, trials)) {
      result.rows.push_back({lambda, sigma, est.policy, est.cr, est.stderr_cr});
    }
  }
  return result;
}

DeviationFit fit_deviation(const SweepResult& sweep, PolicyId policy) {
  std::vector<double> x, y;
  for (const SweepRow& row : sweep.rows) {
    if (row.policy == policy) {
      x.push_back(row.sigma_combined);
      y.push_back(1.0 - row.cr);
    }
  }
  const std::size_t n = x.size();
  if (n < 3) {
    throw std::invalid_argument("fit_deviation: need >= 3 sweep rows for " +
                                policy_name(policy) + ", got " + std::to_string(n));
  }
  double mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mean_x) * (x[i] - mean_x);
    sxy += (x[i] - mean_x) * (y[i] - mean_y);
    syy += (y[i] - mean_y) * (y[i] - mean_y);
  }
  if (sxx == 0) {
    throw std::invalid_argument("fit_deviation: all sigma values identical; fit is degenerate");
  }

  DeviationFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double resid = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += resid * resid;
  }
  const double dof = static_cast<double>(n) - 2.0;
  const double s2 = dof > 0 ? ssr / dof : 0.0;
  fit.slope_stderr = std::sqrt(s2 / sxx);
  fit.intercept_stderr = std::sqrt(s2 * (1.0 / n + mean_x * mean_x / sxx));
  fit.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
  return fit;
}

}  // namespace dmm
