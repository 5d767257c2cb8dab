#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmm/core.hpp"
#include "dmm/pmf.hpp"

namespace dmm {

enum class AssignMode {
  kFixedTable,              // cycle deadlines/criticalities from a config table
  kUniformRandom,           // both drawn uniformly from the configured ranges
  kLaterHigherCriticality,  // criticality ramps up with arrival time
};

struct TableEntry {
  int slack = 0;
  Money criticality = 0;
  bool operator==(const TableEntry&) const = default;
};

// How sampled loads get their deadline slack and criticality. Criticality is
// always clamped so the willingness to pay stays strictly positive through
// the deadline.
struct LoadAssignerSpec {
  AssignMode mode = AssignMode::kUniformRandom;
  int min_slack = 0;  // deadline = min(arrival + slack, horizon)
  int max_slack = 0;
  Money min_criticality = 0;
  Money max_criticality = 0;
  std::vector<TableEntry> table;  // kFixedTable only

  std::vector<std::string> validate() const;
  bool operator==(const LoadAssignerSpec&) const = default;
};

struct ScenarioConfig {
  MarketParams params;
  DiscretePmf n_pmf;  // loads arriving per step
  DiscretePmf s_pmf;  // renewable units per step
  double lambda = 1.0;  // variance scale applied to both pmfs before sampling
  LoadAssignerSpec assigner;
  std::uint64_t seed = 0;

  std::vector<std::string> validate() const;
};

// Seeds for the independent draw streams. They all default to the config
// seed; tests can vary one stream without disturbing the others.
struct StreamSeeds {
  std::uint64_t arrivals = 0;
  std::uint64_t supply = 0;
  std::uint64_t loads = 0;
};

// Moments of the lambda-scaled pmfs, i.e. of the process actually sampled.
MomentSummary scaled_moments(const ScenarioConfig& config);

// Draws one full scenario. Deterministic: identical config gives an
// identical realization bit for bit.
Realization sample_realization(const ScenarioConfig& config);
Realization sample_realization(const ScenarioConfig& config, const StreamSeeds& seeds);

// Per-trial sub-seed, stable in the trial index.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index);

// FNV-1a over the realization's canonical content; used to confirm that
// compared policies consumed the same sampled scenario.
std::uint64_t realization_hash(const Realization& r);

}  // namespace dmm
