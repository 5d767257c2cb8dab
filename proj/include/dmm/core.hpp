#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dmm {

// Money is held as integer micro-dollars so welfare sums are exact and runs
// are bit-for-bit reproducible. Dollar <-> Money conversion happens only at
// I/O boundaries (config parsing, CSV emission).
using Money = std::int64_t;

inline constexpr Money kMicrosPerDollar = 1'000'000;

Money money_from_dollars(double dollars);
double money_to_dollars(Money m);

// Exact decimal rendering with minimal digits: 13000000 -> "13",
// -1250000 -> "-1.25".
std::string format_money(Money m);

// A unit-demand flexible load. Its willingness to pay equals the grid price
// on arrival and decays by `criticality` per step until the deadline.
struct LoadSpec {
  int id = 0;
  int arrival = 1;   // first step the load is active (steps are 1-based)
  int deadline = 1;  // last step the load may be served, inclusive
  Money criticality = 0;  // utility decay per step, >= 0

  bool operator==(const LoadSpec&) const = default;
};

struct MarketParams {
  Money grid_price = 0;          // per unit of energy, > 0
  int horizon = 1;               // number of market steps T
  double unit_energy_mwh = 0.1;  // physical size of one unit; documentation only

  bool operator==(const MarketParams&) const = default;
};

// One fully sampled scenario: per-step arrival lists and renewable units.
struct Realization {
  MarketParams params;
  std::vector<std::vector<LoadSpec>> arrivals;  // arrivals[t-1]: loads with arrival == t
  std::vector<int> supply;                      // supply[t-1]: renewable units S_t

  int total_loads() const;
  bool operator==(const Realization&) const = default;
};

enum class Source : std::uint8_t { Res, Gs };

struct MatchRecord {
  int load_id = 0;
  int time = 0;
  Source source = Source::Res;
  Money utility = 0;  // willingness to pay at match time
  Money cost = 0;     // 0 for RES, grid_price for GS
  Money welfare = 0;  // utility - cost

  bool operator==(const MatchRecord&) const = default;
};

// Welfare ledger for one run. The platform pays nothing for renewable
// energy, so a RES match contributes its full utility while a GS match
// contributes utility minus the grid price (never positive).
struct WelfareBreakdown {
  Money total = 0;
  Money w_rs = 0;          // welfare from RES matches
  Money w_gs = 0;          // welfare from GS matches
  Money grid_payment = 0;  // -grid_price * (#GS matches), always <= 0
  std::vector<MatchRecord> records;
};

// grid_price - criticality * (t - arrival); strictly positive for any load
// satisfying its invariants. Throws std::invalid_argument when t lies
// outside [arrival, deadline], naming the load.
Money willingness_to_pay(const LoadSpec& load, int t, Money grid_price);

Money record_welfare(const MatchRecord& record);

WelfareBreakdown make_breakdown(std::vector<MatchRecord> records, Money grid_price);

// Every invariant violation in the realization, one message each; empty
// means valid. Violations are data, not exceptions.
std::vector<std::string> validate_realization(
    const Realization& r,
    std::optional<int> supply_bound = std::nullopt,
    std::optional<int> arrivals_bound = std::nullopt);

}  // namespace dmm
