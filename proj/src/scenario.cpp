#include "dmm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dmm/rng.hpp"

namespace dmm {

std::vector<std::string> LoadAssignerSpec::validate() const {
  std::vector<std::string> issues;
  if (min_slack < 0) issues.push_back("loads.deadline_window: min_slack must be >= 0");
  if (max_slack < min_slack) {
    issues.push_back("loads.deadline_window: max_slack " + std::to_string(max_slack) +
                     " below min_slack " + std::to_string(min_slack));
  }
  if (min_criticality < 0) issues.push_back("loads.criticality_range: lower bound must be >= 0");
  if (max_criticality < min_criticality) {
    issues.push_back("loads.criticality_range: upper bound " + format_money(max_criticality) +
                     " below lower bound " + format_money(min_criticality));
  }
  if (mode == AssignMode::kFixedTable) {
    if (table.empty()) issues.push_back("loads.table: required (non-empty) for fixed_table mode");
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i].slack < 0) {
        issues.push_back("loads.table[" + std::to_string(i) + "].slack: must be >= 0");
      }
      if (table[i].criticality < 0) {
        issues.push_back("loads.table[" + std::to_string(i) + "].criticality: must be >= 0");
      }
    }
  }
  return issues;
}

std::vector<std::string> ScenarioConfig::validate() const {
  std::vector<std::string> issues;
  if (params.grid_price <= 0) issues.push_back("market.grid_price: must be > 0");
  if (params.horizon < 1) issues.push_back("market.horizon: must be >= 1");
  for (const auto& issue : n_pmf.validate()) issues.push_back("arrivals." + issue);
  for (const auto& issue : s_pmf.validate()) issues.push_back("supply." + issue);
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    issues.push_back("experiment.lambda: " + std::to_string(lambda) + " outside [0, 1]");
  }
  for (const auto& issue : assigner.validate()) issues.push_back(issue);
  return issues;
}

MomentSummary scaled_moments(const ScenarioConfig& config) {
  return moments(scale_variance(config.n_pmf, config.lambda),
                 scale_variance(config.s_pmf, config.lambda));
}

namespace {

// Keep the willingness to pay strictly positive through the deadline.
Money clamp_criticality(Money b, int arrival, int deadline, Money grid_price) {
  if (b < 0) b = 0;
  const int window = deadline - arrival;
  if (window <= 0) return b;
  const Money cap = (grid_price - 1) / window;
  return std::min(b, cap);
}

}  // namespace

Realization sample_realization(const ScenarioConfig& config) {
  return sample_realization(config, StreamSeeds{config.seed, config.seed, config.seed});
}

Realization sample_realization(const ScenarioConfig& config, const StreamSeeds& seeds) {
  {
    const auto issues = config.validate();
    if (!issues.empty()) {
      std::string msg = "sample_realization: invalid config:";
      for (const auto& issue : issues) msg += "\n  " + issue;
      throw std::invalid_argument(msg);
    }
  }

  const DiscretePmf n_scaled = scale_variance(config.n_pmf, config.lambda);
  const DiscretePmf s_scaled = scale_variance(config.s_pmf, config.lambda);
  const int horizon = config.params.horizon;
  const Money c = config.params.grid_price;
  const LoadAssignerSpec& assigner = config.assigner;

  Realization r;
  r.params = config.params;
  r.arrivals.resize(horizon);
  r.supply.resize(horizon);

  int next_id = 0;
  for (int t = 1; t <= horizon; ++t) {
    r.supply[t - 1] =
        s_scaled.sample(rng::uniform01(seeds.supply, rng::kSupply, t, 0));
    const int n_t =
        n_scaled.sample(rng::uniform01(seeds.arrivals, rng::kArrivalCount, t, 0));

    for (int k = 0; k < n_t; ++k) {
      LoadSpec load;
      load.id = next_id++;
      load.arrival = t;

      const double u_slack =
          rng::uniform01(seeds.loads, rng::kLoadParams, t, 2 * static_cast<std::uint64_t>(k));
      const double u_crit =
          rng::uniform01(seeds.loads, rng::kLoadParams, t, 2 * static_cast<std::uint64_t>(k) + 1);

      int slack = 0;
      Money b = 0;
      switch (assigner.mode) {
        case AssignMode::kFixedTable: {
          const TableEntry& entry = assigner.table[load.id % assigner.table.size()];
          slack = entry.slack;
          b = entry.criticality;
          break;
        }
        case AssignMode::kUniformRandom: {
          slack = rng::uniform_int(u_slack, assigner.min_slack, assigner.max_slack);
          b = assigner.min_criticality +
              static_cast<Money>(std::llround(
                  u_crit * static_cast<double>(assigner.max_criticality - assigner.min_criticality)));
          break;
        }
        case AssignMode::kLaterHigherCriticality: {
          slack = rng::uniform_int(u_slack, assigner.min_slack, assigner.max_slack);
          // Deterministic ramp in t, so criticality is non-decreasing in
          // arrival time across the whole realization. Clamp with the
          // mode-wide worst-case window rather than the per-load one: a
          // per-load clamp would vary with the random deadline and could
          // break the monotonicity.
          const double frac = horizon > 1 ? static_cast<double>(t - 1) / (horizon - 1) : 0.0;
          b = assigner.min_criticality +
              static_cast<Money>(std::llround(
                  frac * static_cast<double>(assigner.max_criticality - assigner.min_criticality)));
          const int worst_window = std::min(assigner.max_slack, horizon - 1);
          if (worst_window > 0) b = std::min(b, (c - 1) / worst_window);
          break;
        }
      }

      load.deadline = std::min(load.arrival + slack, horizon);
      load.criticality = clamp_criticality(b, load.arrival, load.deadline, c);
      r.arrivals[t - 1].push_back(load);
    }
  }
  return r;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
  return rng::keyed_u64(base_seed, rng::kTrial, trial_index, 0);
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ull;

void fnv_absorb(std::uint64_t& h, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xFF;
    h *= kFnvPrime;
  }
}

}  // namespace

std::uint64_t realization_hash(const Realization& r) {
  std::uint64_t h = kFnvOffset;
  fnv_absorb(h, static_cast<std::uint64_t>(r.params.grid_price));
  fnv_absorb(h, static_cast<std::uint64_t>(r.params.horizon));
  for (int s : r.supply) fnv_absorb(h, static_cast<std::uint64_t>(s));
  for (const auto& step : r.arrivals) {
    fnv_absorb(h, static_cast<std::uint64_t>(step.size()));
    for (const LoadSpec& load : step) {
      fnv_absorb(h, static_cast<std::uint64_t>(load.id));
      fnv_absorb(h, static_cast<std::uint64_t>(load.arrival));
      fnv_absorb(h, static_cast<std::uint64_t>(load.deadline));
      fnv_absorb(h, static_cast<std::uint64_t>(load.criticality));
    }
  }
  return h;
}

}  // namespace dmm
