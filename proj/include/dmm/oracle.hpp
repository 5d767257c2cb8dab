#pragma once

#include <cstdint>
#include <vector>

#include "dmm/core.hpp"

namespace dmm {

// One renewable unit available at step t.
struct SlotRef {
  int t = 0;
  int unit = 0;  // index within the step, 0 .. S_t-1
  bool operator==(const SlotRef&) const = default;
};

// The offline view of a realization: loads on one side, per-unit renewable
// slots on the other. A (load, slot) pair is admissible iff the slot's step
// lies in the load's active window; its weight is the willingness to pay
// there, always strictly positive. Inadmissible pairs are simply absent.
struct AssignmentProblem {
  std::vector<LoadSpec> loads;
  std::vector<SlotRef> slots;
  Money grid_price = 0;

  bool admissible(std::size_t load_idx, std::size_t slot_idx) const;
  Money weight(std::size_t load_idx, std::size_t slot_idx) const;
};

AssignmentProblem build_assignment_problem(const Realization& r);

// Exact maximum-welfare offline assignment (successive shortest augmenting
// paths with potentials). Loads not worth a renewable slot are served from
// the grid at their arrival step, contributing exactly zero welfare.
WelfareBreakdown oracle_solve(const Realization& r);

// Independent exact check for tiny instances: exhaustive search over all
// load -> (slot | grid-at-arrival) assignments, memoized on the used-slot
// set. Refuses instances with more than 8 loads or 12 slots.
WelfareBreakdown brute_force_oracle(const Realization& r);

// Bounded random instance for oracle cross-checks: horizon <= 4, at most
// 8 loads and 12 renewable units. Deterministic in (seed, index).
Realization random_tiny_instance(std::uint64_t seed, std::uint64_t index);

}  // namespace dmm
