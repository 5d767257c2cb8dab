#include "dmm/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "dmm/engine.hpp"
#include "dmm/scenario.hpp"

using namespace dmm;

namespace {

constexpr Money dollars(double d) { return static_cast<Money>(d * kMicrosPerDollar); }

LoadSpec load(int id, int a, int d, Money b) { return LoadSpec{id, a, d, b}; }

Realization two_step_instance() {
  Realization r;
  r.params = {dollars(13), 2, 0.1};
  r.arrivals = {{load(1, 1, 2, dollars(1)), load(2, 1, 1, dollars(2))}, {}};
  r.supply = {1, 0};
  return r;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("the two-step instance is worth exactly 13") {
  const Realization r = two_step_instance();
  CHECK(oracle_solve(r).total == dollars(13));
  CHECK(brute_force_oracle(r).total == dollars(13));
}

TEST_CASE("no renewables means zero welfare, grid at arrival") {
  Realization r;
  r.params = {dollars(13), 3, 0.1};
  r.arrivals = {{load(0, 1, 3, dollars(1))}, {load(1, 2, 2, dollars(2))}, {}};
  r.supply = {0, 0, 0};
  const WelfareBreakdown b = oracle_solve(r);
  CHECK(b.total == 0);
  for (const MatchRecord& rec : b.records) {
    CHECK(rec.source == Source::Gs);
    CHECK(rec.welfare == 0);
  }
  CHECK(b.records[0].time == 1);
  CHECK(b.records[1].time == 2);
}

TEST_CASE("abundant supply serves everything at arrival price") {
  Realization r;
  r.params = {dollars(13), 2, 0.1};
  r.arrivals = {{load(0, 1, 2, dollars(1)), load(1, 1, 2, dollars(2))},
                {load(2, 2, 2, dollars(1))}};
  r.supply = {4, 4};
  CHECK(oracle_solve(r).total == dollars(39));
}

TEST_CASE("single load, single admissible slot") {
  Realization r;
  r.params = {dollars(13), 2, 0.1};
  r.arrivals = {{load(0, 1, 2, dollars(1))}, {}};
  r.supply = {0, 1};  // only reachable at t=2, utility 12
  CHECK(brute_force_oracle(r).total == dollars(12));
  CHECK(oracle_solve(r).total == dollars(12));
}

TEST_CASE("zero loads solve to zero") {
  Realization r;
  r.params = {dollars(13), 2, 0.1};
  r.arrivals = {{}, {}};
  r.supply = {2, 2};
  CHECK(oracle_solve(r).total == 0);
  CHECK(brute_force_oracle(r).total == 0);
}

TEST_CASE("the oracle prefers waiting when a better pairing exists") {
  // One unit at t=2 only. L0 decays fast, L1 not at all. Serving L1 at t=2
  // (13) and L0 on grid at arrival (0) beats serving L0 at t=2 (8).
  Realization r;
  r.params = {dollars(13), 2, 0.1};
  r.arrivals = {{load(0, 1, 2, dollars(5)), load(1, 1, 2, dollars(0))}, {}};
  r.supply = {0, 1};
  const WelfareBreakdown b = oracle_solve(r);
  CHECK(b.total == dollars(13));
  CHECK(b.records[1].source == Source::Res);
  CHECK(b.records[0].source == Source::Gs);
  CHECK(b.records[0].time == 1);  // grid fallback lands on the arrival step
}

TEST_CASE("brute force refuses oversized instances") {
  Realization r;
  r.params = {dollars(13), 2, 0.1};
  r.arrivals.resize(2);
  for (int i = 0; i < 9; ++i) r.arrivals[0].push_back(load(i, 1, 2, 0));
  r.supply = {1, 1};
  CHECK_THROWS_AS(brute_force_oracle(r), std::invalid_argument);

  Realization big_slots;
  big_slots.params = {dollars(13), 2, 0.1};
  big_slots.arrivals = {{load(0, 1, 1, 0)}, {}};
  big_slots.supply = {7, 6};
  CHECK_THROWS_AS(brute_force_oracle(big_slots), std::invalid_argument);
}

TEST_CASE("exact solver agrees with brute force on random tiny instances") {
  for (std::uint64_t i = 0; i < 300; ++i) {
    const Realization r = random_tiny_instance(99, i);
    CAPTURE(i);
    REQUIRE(validate_realization(r).empty());
    CHECK(oracle_solve(r).total == brute_force_oracle(r).total);
  }
}

TEST_CASE("oracle dominates every online policy on every realization") {
  ScenarioConfig config;
  config.params = {dollars(13), 8, 0.1};
  config.n_pmf = DiscretePmf::uniform(0, 4);
  config.s_pmf = DiscretePmf::uniform(0, 3);
  config.assigner.min_slack = 0;
  config.assigner.max_slack = 4;
  config.assigner.min_criticality = dollars(0.25);
  config.assigner.max_criticality = dollars(3);
  MomentSummary m;
  m.mu_n = 2.0;
  m.mu_s = 1.5;
  for (std::uint64_t seed = 0; seed < 250; ++seed) {
    config.seed = seed;
    const Realization r = sample_realization(config);
    const Money best = oracle_solve(r).total;
    for (PolicyId policy : kAllPolicies) {
      CAPTURE(seed);
      CAPTURE(policy_name(policy));
      CHECK(run_online(policy, r, m).total <= best);
    }
  }
}

TEST_CASE("oracle never books a grid match below zero welfare") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Realization r = random_tiny_instance(7, i);
    for (const MatchRecord& rec : oracle_solve(r).records) {
      if (rec.source == Source::Gs) CHECK(rec.welfare == 0);
    }
  }
}

TEST_CASE("mean oracle welfare clears the n_sm rate bound") {
  // E[W] >= c * T * E[min(n_t, S_t)], checked to three standard errors.
  ScenarioConfig config;
  config.params = {dollars(13), 6, 0.1};
  config.n_pmf = DiscretePmf::uniform(1, 3);
  config.s_pmf = DiscretePmf::uniform(1, 3);
  config.assigner.min_slack = 0;
  config.assigner.max_slack = 2;
  config.assigner.min_criticality = dollars(0.5);
  config.assigner.max_criticality = dollars(2);
  config.seed = 5;

  const double n_sm = moments(config.n_pmf, config.s_pmf).n_sm;
  const int trials = 600;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t seed = trial_seed(config.seed, i);
    const Realization r = sample_realization(config, StreamSeeds{seed, seed, seed});
    const double w = money_to_dollars(oracle_solve(r).total);
    sum += w;
    sum_sq += w * w;
  }
  const double mean = sum / trials;
  const double var = (sum_sq - trials * mean * mean) / (trials - 1);
  const double se = std::sqrt(var / trials);
  const double bound = 13.0 * config.params.horizon * n_sm;
  CHECK(mean >= bound - 3 * se);
}

TEST_CASE("assignment problem exposes admissibility and positive weights") {
  const AssignmentProblem p = build_assignment_problem(two_step_instance());
  REQUIRE(p.loads.size() == 2);
  REQUIRE(p.slots.size() == 1);
  CHECK(p.slots[0].t == 1);
  CHECK(p.admissible(0, 0));
  CHECK(p.admissible(1, 0));
  CHECK(p.weight(0, 0) == dollars(13));
  CHECK(p.weight(1, 0) == dollars(13));
}

}  // TEST_SUITE
