#include "dmm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace dmm {

std::string policy_name(PolicyId policy) {
  switch (policy) {
    case PolicyId::kM1: return "m1";
    case PolicyId::kM1NoStep3: return "m1-ns3";
    case PolicyId::kM2: return "m2";
    case PolicyId::kM2NoStep3: return "m2-ns3";
    case PolicyId::kEdf: return "edf";
    case PolicyId::kMh: return "mh";
  }
  return "?";
}

std::optional<PolicyId> parse_policy(std::string_view name) {
  for (PolicyId policy : kAllPolicies) {
    if (policy_name(policy) == name) return policy;
  }
  return std::nullopt;
}

bool policy_needs_surplus_arrivals(PolicyId policy) {
  return policy == PolicyId::kM2 || policy == PolicyId::kM2NoStep3;
}

std::vector<LoadSpec> order_active(std::vector<LoadSpec> active) {
  std::sort(active.begin(), active.end(), [](const LoadSpec& a, const LoadSpec& b) {
    if (a.criticality != b.criticality) return a.criticality > b.criticality;
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    return a.id < b.id;
  });
  return active;
}

namespace {

// Steps 2-4 of the criticality-greedy policy, shared by M1 and M2. M2 slots
// its fresh-arrival grid quota between step 3 and the deadline step.
StepDecisions greedy_step(const EngineState& state, int s_t, Money grid_price,
                          bool apply_step3, bool apply_quota, double* m2_carry,
                          double surplus_rate) {
  StepDecisions out;
  const int t = state.t;
  const std::vector<LoadSpec> ordered = order_active(state.active);
  const int m = static_cast<int>(ordered.size());

  // Step 2: renewable units go to the most critical loads.
  const int res_count = std::min(s_t, m);
  for (int i = 0; i < res_count; ++i) out.res_matches.push_back(ordered[i].id);

  std::vector<LoadSpec> remaining(ordered.begin() + res_count, ordered.end());

  // Step 3: any remaining load that values energy strictly more than some
  // renewable-served load is matched to the grid now.
  if (apply_step3 && res_count > 0) {
    Money min_served_pi = willingness_to_pay(ordered[0], t, grid_price);
    for (int i = 1; i < res_count; ++i) {
      min_served_pi = std::min(min_served_pi, willingness_to_pay(ordered[i], t, grid_price));
    }
    std::vector<LoadSpec> kept;
    kept.reserve(remaining.size());
    for (const LoadSpec& load : remaining) {
      if (willingness_to_pay(load, t, grid_price) > min_served_pi) {
        out.gs_matches.push_back(load.id);
      } else {
        kept.push_back(load);
      }
    }
    remaining.swap(kept);
  }

  // M2 extra step: commit up to the accumulated quota of still-unmatched
  // fresh arrivals to the grid, most critical first. Unmet quota rolls
  // over, capped at one step's worth so the carry stays in [0, rate + 1).
  if (apply_quota) {
    *m2_carry += surplus_rate;
    const int quota = static_cast<int>(std::floor(*m2_carry + 1e-9));
    int taken = 0;
    std::vector<LoadSpec> kept;
    kept.reserve(remaining.size());
    for (const LoadSpec& load : remaining) {
      if (taken < quota && load.arrival == t) {
        out.gs_matches.push_back(load.id);
        ++taken;
      } else {
        kept.push_back(load);
      }
    }
    remaining.swap(kept);
    *m2_carry -= taken;
    *m2_carry = std::min(*m2_carry, std::max(surplus_rate, 1.0));
  }

  // Deadline step: whatever is still unmatched and due now goes to the grid.
  for (const LoadSpec& load : remaining) {
    if (load.deadline == t) out.gs_matches.push_back(load.id);
  }
  return out;
}

StepDecisions baseline_step(const EngineState& state, int s_t,
                            const std::vector<LoadSpec>& ordered) {
  StepDecisions out;
  const int t = state.t;
  const int res_count = std::min(s_t, static_cast<int>(ordered.size()));
  for (int i = 0; i < res_count; ++i) out.res_matches.push_back(ordered[i].id);
  for (std::size_t i = res_count; i < ordered.size(); ++i) {
    if (ordered[i].deadline == t) out.gs_matches.push_back(ordered[i].id);
  }
  return out;
}

}  // namespace

StepDecisions m1_step(const EngineState& state, int s_t, Money grid_price, bool apply_step3) {
  return greedy_step(state, s_t, grid_price, apply_step3, false, nullptr, 0.0);
}

StepDecisions m2_step(EngineState& state, int s_t, Money grid_price,
                      const MomentSummary& moments, bool apply_step3) {
  if (moments.mu_n < moments.mu_s) {
    throw std::invalid_argument(
        "m2_step: mean arrivals (" + std::to_string(moments.mu_n) +
        ") below mean supply (" + std::to_string(moments.mu_s) +
        "); M2 requires mu_n >= mu_s (use M1 instead)");
  }
  return greedy_step(state, s_t, grid_price, apply_step3, true, &state.m2_carry,
                     moments.mu_n - moments.mu_s);
}

StepDecisions edf_step(const EngineState& state, int s_t) {
  std::vector<LoadSpec> ordered = state.active;
  std::sort(ordered.begin(), ordered.end(), [](const LoadSpec& a, const LoadSpec& b) {
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    if (a.criticality != b.criticality) return a.criticality > b.criticality;
    return a.id < b.id;
  });
  return baseline_step(state, s_t, ordered);
}

StepDecisions mh_step(const EngineState& state, int s_t, Money grid_price) {
  const int t = state.t;
  std::vector<LoadSpec> ordered = state.active;
  std::sort(ordered.begin(), ordered.end(),
            [t, grid_price](const LoadSpec& a, const LoadSpec& b) {
              const Money pa = willingness_to_pay(a, t, grid_price);
              const Money pb = willingness_to_pay(b, t, grid_price);
              if (pa != pb) return pa > pb;
              if (a.deadline != b.deadline) return a.deadline < b.deadline;
              return a.id < b.id;
            });
  return baseline_step(state, s_t, ordered);
}

WelfareBreakdown run_online(PolicyId policy, const Realization& r,
                            const MomentSummary& moments,
                            std::vector<StepTrace>* trace) {
  if (policy_needs_surplus_arrivals(policy) && moments.mu_n < moments.mu_s) {
    throw std::invalid_argument(
        "run_online: policy " + policy_name(policy) + " requires mu_n >= mu_s, got mu_n=" +
        std::to_string(moments.mu_n) + " mu_s=" + std::to_string(moments.mu_s));
  }

  const Money c = r.params.grid_price;
  const int horizon = r.params.horizon;
  EngineState state;
  if (trace) trace->clear();

  for (state.t = 1; state.t <= horizon; ++state.t) {
    const int t = state.t;
    for (const LoadSpec& load : r.arrivals[t - 1]) state.active.push_back(load);
    const int s_t = r.supply[t - 1];

    std::vector<int> ordered_before;
    if (trace) {
      for (const LoadSpec& l : order_active(state.active)) ordered_before.push_back(l.id);
    }

    StepDecisions decisions;
    switch (policy) {
      case PolicyId::kM1: decisions = m1_step(state, s_t, c, true); break;
      case PolicyId::kM1NoStep3: decisions = m1_step(state, s_t, c, false); break;
      case PolicyId::kM2: decisions = m2_step(state, s_t, c, moments, true); break;
      case PolicyId::kM2NoStep3: decisions = m2_step(state, s_t, c, moments, false); break;
      case PolicyId::kEdf: decisions = edf_step(state, s_t); break;
      case PolicyId::kMh: decisions = mh_step(state, s_t, c); break;
    }
    if (decisions.s_used() > s_t) {
      throw std::logic_error("run_online: step " + std::to_string(t) +
                             " used more renewable units than available");
    }

    std::unordered_set<int> matched;
    auto record = [&](int load_id, Source source) {
      const auto it = std::find_if(state.active.begin(), state.active.end(),
                                   [load_id](const LoadSpec& l) { return l.id == load_id; });
      if (it == state.active.end() || !matched.insert(load_id).second) {
        throw std::logic_error("run_online: step " + std::to_string(t) +
                               " matched unknown or already-matched load " +
                               std::to_string(load_id));
      }
      MatchRecord rec;
      rec.load_id = load_id;
      rec.time = t;
      rec.source = source;
      rec.utility = willingness_to_pay(*it, t, c);
      rec.cost = source == Source::Gs ? c : 0;
      rec.welfare = rec.utility - rec.cost;
      state.ledger.push_back(rec);
    };
    for (int id : decisions.res_matches) record(id, Source::Res);
    for (int id : decisions.gs_matches) record(id, Source::Gs);

    std::erase_if(state.active,
                  [&matched](const LoadSpec& l) { return matched.count(l.id) > 0; });
    for (const LoadSpec& load : state.active) {
      if (load.deadline <= t) {
        throw std::logic_error("run_online: load " + std::to_string(load.id) +
                               " left unmatched past its deadline at step " + std::to_string(t));
      }
    }

    if (trace) {
      StepTrace st;
      st.t = t;
      st.ordered_ids = std::move(ordered_before);  // criticality order at step start
      st.decisions = decisions;
      st.m2_carry_after = state.m2_carry;
      trace->push_back(std::move(st));
    }
  }

  if (!state.active.empty()) {
    throw std::logic_error("run_online: " + std::to_string(state.active.size()) +
                           " loads left unmatched at the horizon");
  }
  return make_breakdown(std::move(state.ledger), c);
}

}  // namespace dmm
