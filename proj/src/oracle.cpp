#include "dmm/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dmm/rng.hpp"

namespace dmm {

bool AssignmentProblem::admissible(std::size_t load_idx, std::size_t slot_idx) const {
  const LoadSpec& load = loads[load_idx];
  const int t = slots[slot_idx].t;
  return t >= load.arrival && t <= load.deadline;
}

Money AssignmentProblem::weight(std::size_t load_idx, std::size_t slot_idx) const {
  return willingness_to_pay(loads[load_idx], slots[slot_idx].t, grid_price);
}

AssignmentProblem build_assignment_problem(const Realization& r) {
  AssignmentProblem p;
  p.grid_price = r.params.grid_price;
  for (const auto& step : r.arrivals) {
    for (const LoadSpec& load : step) p.loads.push_back(load);
  }
  for (int t = 1; t <= r.params.horizon; ++t) {
    for (int unit = 0; unit < r.supply[t - 1]; ++unit) p.slots.push_back({t, unit});
  }
  return p;
}

namespace {

WelfareBreakdown breakdown_from_slot_assignment(const AssignmentProblem& p,
                                                const std::vector<int>& slot_of_load) {
  std::vector<MatchRecord> records;
  records.reserve(p.loads.size());
  for (std::size_t i = 0; i < p.loads.size(); ++i) {
    const LoadSpec& load = p.loads[i];
    MatchRecord rec;
    rec.load_id = load.id;
    if (slot_of_load[i] >= 0) {
      rec.time = p.slots[slot_of_load[i]].t;
      rec.source = Source::Res;
      rec.utility = willingness_to_pay(load, rec.time, p.grid_price);
      rec.cost = 0;
    } else {
      // Grid at arrival: utility equals the grid price, welfare exactly 0.
      rec.time = load.arrival;
      rec.source = Source::Gs;
      rec.utility = p.grid_price;
      rec.cost = p.grid_price;
    }
    rec.welfare = rec.utility - rec.cost;
    records.push_back(rec);
  }
  return make_breakdown(std::move(records), p.grid_price);
}

constexpr Money kInf = std::numeric_limits<Money>::max() / 4;

// Min-cost assignment by successive shortest augmenting paths (Jonker-
// Volgenant style row addition with dual potentials). Each load row sees its
// admissible slots at cost -weight plus a private opt-out column at cost 0,
// so the minimum-cost solution is exactly the maximum-welfare matching with
// grid fallback. All arithmetic is in integer micro-dollars; the result is
// exact.
std::vector<int> solve_max_weight(const AssignmentProblem& p) {
  const int n_loads = static_cast<int>(p.loads.size());
  const int n_slots = static_cast<int>(p.slots.size());
  const int n_cols = n_slots + n_loads;  // real slots, then one opt-out per load

  // Sparse adjacency per load: (column, cost).
  std::vector<std::vector<std::pair<int, Money>>> adj(n_loads);
  for (int i = 0; i < n_loads; ++i) {
    for (int j = 0; j < n_slots; ++j) {
      if (p.admissible(i, j)) adj[i].push_back({j, -p.weight(i, j)});
    }
    adj[i].push_back({n_slots + i, 0});
  }

  // Column layout: real slots, opt-outs, then one virtual start column used
  // to seed each row's augmenting search.
  const int start = n_cols;
  std::vector<Money> u(n_loads, 0), v(n_cols + 1, 0);
  std::vector<int> match_row(n_cols + 1, -1);  // column -> load

  for (int row = 0; row < n_loads; ++row) {
    match_row[start] = row;
    std::vector<Money> minv(n_cols + 1, kInf);
    std::vector<char> used(n_cols + 1, 0);
    std::vector<int> way(n_cols + 1, start);

    int j0 = start;
    do {
      used[j0] = 1;
      const int i0 = match_row[j0];
      for (const auto& [col, cost] : adj[i0]) {
        if (used[col]) continue;
        const Money reduced = cost - u[i0] - v[col];
        if (reduced < minv[col]) {
          minv[col] = reduced;
          way[col] = j0;
        }
      }
      Money delta = kInf;
      int j1 = -1;
      for (int col = 0; col < n_cols; ++col) {
        if (!used[col] && minv[col] < delta) {
          delta = minv[col];
          j1 = col;
        }
      }
      // The row's private opt-out column is always reachable and stays free
      // until this row is placed, so a finite delta always exists.
      for (int col = 0; col <= n_cols; ++col) {
        if (used[col]) {
          u[match_row[col]] += delta;
          v[col] -= delta;
        } else if (minv[col] < kInf) {
          minv[col] -= delta;
        }
      }
      j0 = j1;
    } while (match_row[j0] >= 0);

    do {
      const int j1 = way[j0];
      match_row[j0] = match_row[j1];
      j0 = j1;
    } while (j0 != start);
  }

  std::vector<int> slot_of_load(n_loads, -1);
  for (int col = 0; col < n_slots; ++col) {
    if (match_row[col] >= 0) slot_of_load[match_row[col]] = col;
  }
  return slot_of_load;
}

}  // namespace

WelfareBreakdown oracle_solve(const Realization& r) {
  const AssignmentProblem p = build_assignment_problem(r);
  return breakdown_from_slot_assignment(p, solve_max_weight(p));
}

WelfareBreakdown brute_force_oracle(const Realization& r) {
  const AssignmentProblem p = build_assignment_problem(r);
  const int n_loads = static_cast<int>(p.loads.size());
  const int n_slots = static_cast<int>(p.slots.size());
  if (n_loads > 8 || n_slots > 12) {
    throw std::invalid_argument("brute_force_oracle: instance too large (" +
                                std::to_string(n_loads) + " loads, " + std::to_string(n_slots) +
                                " slots; limits are 8 and 12)");
  }

  // best[i][mask]: welfare of the best assignment of loads i.. with the
  // slots in mask already taken. -1 marks unvisited (welfare is never
  // negative here because grid-at-arrival contributes 0).
  const int n_masks = 1 << n_slots;
  std::vector<std::vector<Money>> best(n_loads + 1, std::vector<Money>(n_masks, -1));

  auto solve = [&](auto&& self, int i, int mask) -> Money {
    if (i == n_loads) return 0;
    Money& memo = best[i][mask];
    if (memo >= 0) return memo;
    Money value = self(self, i + 1, mask);  // grid at arrival, +0
    for (int j = 0; j < n_slots; ++j) {
      if ((mask >> j & 1) == 0 && p.admissible(i, j)) {
        value = std::max(value, p.weight(i, j) + self(self, i + 1, mask | (1 << j)));
      }
    }
    memo = value;
    return value;
  };
  solve(solve, 0, 0);

  // Walk the table to extract one witness assignment.
  std::vector<int> slot_of_load(n_loads, -1);
  int mask = 0;
  for (int i = 0; i < n_loads; ++i) {
    const Money target = best[i][mask];
    if (solve(solve, i + 1, mask) == target) continue;
    for (int j = 0; j < n_slots; ++j) {
      if ((mask >> j & 1) == 0 && p.admissible(i, j) &&
          p.weight(i, j) + solve(solve, i + 1, mask | (1 << j)) == target) {
        slot_of_load[i] = j;
        mask |= 1 << j;
        break;
      }
    }
  }
  return breakdown_from_slot_assignment(p, slot_of_load);
}

Realization random_tiny_instance(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t key = rng::keyed_u64(seed, rng::kInstanceGen, index, 0);
  auto u = [&](std::uint64_t i) { return rng::uniform01(key, rng::kInstanceGen, index, i); };

  Realization r;
  r.params.grid_price = 13 * kMicrosPerDollar;
  r.params.horizon = 1 + rng::uniform_int(u(0), 0, 3);
  const int horizon = r.params.horizon;
  r.arrivals.resize(horizon);
  r.supply.assign(horizon, 0);

  int budget = 12;
  for (int t = 1; t <= horizon; ++t) {
    const int s = rng::uniform_int(u(100 + t), 0, 3);
    r.supply[t - 1] = std::min(s, budget);
    budget -= r.supply[t - 1];
  }

  const int n_loads = rng::uniform_int(u(1), 0, 8);
  for (int k = 0; k < n_loads; ++k) {
    LoadSpec load;
    load.id = k;
    load.arrival = rng::uniform_int(u(200 + 4 * k), 1, horizon);
    load.deadline = std::min(load.arrival + rng::uniform_int(u(201 + 4 * k), 0, 3), horizon);
    const int window = load.deadline - load.arrival;
    const Money cap = window > 0 ? (r.params.grid_price - 1) / window : 6 * kMicrosPerDollar;
    const Money raw = static_cast<Money>(u(202 + 4 * k) * 6.0 * kMicrosPerDollar);
    load.criticality = std::min(raw, cap);
    r.arrivals[load.arrival - 1].push_back(load);
  }
  // Keep ids in arrival order, matching the sampler's convention.
  int next_id = 0;
  for (auto& step : r.arrivals) {
    for (auto& load : step) load.id = next_id++;
  }
  return r;
}

}  // namespace dmm
