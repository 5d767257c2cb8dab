#pragma once

#include <iosfwd>
#include <string>

#include "dmm/config.hpp"
#include "dmm/metrics.hpp"

namespace dmm {

// CSV renderers. Headers are part of the output contract; rows are fully
// deterministic functions of their inputs.
std::string simulate_csv(const TrialBatch& batch);
std::string sweep_csv(const SweepResult& sweep);

struct TableRow {
  std::string scenario;
  std::string policy;
  Money total_welfare = 0;
  int trials = 0;
  double stderr_welfare = 0;  // dollars
};
std::string table_csv(const std::vector<TableRow>& rows);

// Executes the spec's mode end to end: runs the trials, writes the CSV (and
// a small manifest recording the seed) under out_dir, prints a summary.
// Returns 0 on success, 1 on configuration/O errors, 2 when an invariant
// violation or oracle disagreement is detected (the offending seed is
// reported for replay).
int run_experiment(const ExperimentSpec& spec, std::ostream& log);

// The oracle-check mode body: cross-checks the exact solver against the
// brute-force one on `instances` bounded random instances.
bool run_oracle_check(std::uint64_t seed, int instances, std::ostream& log);

}  // namespace dmm
