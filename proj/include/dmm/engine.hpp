#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmm/core.hpp"
#include "dmm/pmf.hpp"

namespace dmm {

// The matching policies. M1 greedily feeds renewable supply to the most
// critical active loads; M2 additionally commits a per-step quota of fresh
// arrivals to grid supply and is the prescribed policy when mean arrivals
// exceed mean supply. The NoStep3 variants skip the ahead-of-deadline grid
// matches of step 3; Edf and Mh are comparison baselines.
enum class PolicyId { kM1, kM1NoStep3, kM2, kM2NoStep3, kEdf, kMh };

inline constexpr PolicyId kAllPolicies[] = {PolicyId::kM1,       PolicyId::kM1NoStep3,
                                            PolicyId::kM2,       PolicyId::kM2NoStep3,
                                            PolicyId::kEdf,      PolicyId::kMh};

std::string policy_name(PolicyId policy);  // "m1", "m1-ns3", "m2", "m2-ns3", "edf", "mh"
std::optional<PolicyId> parse_policy(std::string_view name);
bool policy_needs_surplus_arrivals(PolicyId policy);  // true for the M2 family

// What one policy step decided: which loads go to renewable supply and
// which to the grid, in match order.
struct StepDecisions {
  std::vector<int> res_matches;
  std::vector<int> gs_matches;

  int s_used() const { return static_cast<int>(res_matches.size()); }
  int p_used() const { return static_cast<int>(gs_matches.size()); }
};

// Mutable per-run engine state. `active` holds unmatched loads with
// arrival <= t <= deadline; nothing past its deadline ever stays active.
struct EngineState {
  int t = 1;
  std::vector<LoadSpec> active;
  double m2_carry = 0.0;  // fractional grid-quota accumulator, M2 only
  std::vector<MatchRecord> ledger;
};

// Criticality order: descending criticality, ties by ascending deadline,
// then ascending arrival, then ascending id.
std::vector<LoadSpec> order_active(std::vector<LoadSpec> active);

StepDecisions m1_step(const EngineState& state, int s_t, Money grid_price, bool apply_step3);
StepDecisions m2_step(EngineState& state, int s_t, Money grid_price,
                      const MomentSummary& moments, bool apply_step3);
StepDecisions edf_step(const EngineState& state, int s_t);
StepDecisions mh_step(const EngineState& state, int s_t, Money grid_price);

// Per-step snapshot for tests and diagnostics. ordered_ids is the
// criticality order of the active set at the start of the step (before any
// matches), the order M1/M2 renewable matches must prefix.
struct StepTrace {
  int t = 0;
  std::vector<int> ordered_ids;
  StepDecisions decisions;
  double m2_carry_after = 0.0;
};

// Runs the policy over the whole horizon. Every load is matched exactly
// once, at its deadline at the latest. Decisions at step t depend only on
// the state at t, the current supply, and the static moments.
WelfareBreakdown run_online(PolicyId policy, const Realization& r,
                            const MomentSummary& moments,
                            std::vector<StepTrace>* trace = nullptr);

}  // namespace dmm
