#include "dmm/core.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>

namespace dmm {

Money money_from_dollars(double dollars) {
  return static_cast<Money>(std::llround(dollars * static_cast<double>(kMicrosPerDollar)));
}

double money_to_dollars(Money m) {
  return static_cast<double>(m) / static_cast<double>(kMicrosPerDollar);
}

std::string format_money(Money m) {
  const bool negative = m < 0;
  // Money never approaches INT64_MIN in this domain, but avoid the UB anyway.
  const std::uint64_t abs = negative ? -static_cast<std::uint64_t>(m) : static_cast<std::uint64_t>(m);
  const std::uint64_t whole = abs / kMicrosPerDollar;
  std::uint64_t frac = abs % kMicrosPerDollar;

  std::string out = negative ? "-" : "";
  out += std::to_string(whole);
  if (frac != 0) {
    char digits[8];
    std::snprintf(digits, sizeof(digits), "%06llu", static_cast<unsigned long long>(frac));
    std::string f(digits);
    while (!f.empty() && f.back() == '0') f.pop_back();
    out += '.';
    out += f;
  }
  return out;
}

int Realization::total_loads() const {
  int n = 0;
  for (const auto& step : arrivals) n += static_cast<int>(step.size());
  return n;
}

Money willingness_to_pay(const LoadSpec& load, int t, Money grid_price) {
  if (t < load.arrival || t > load.deadline) {
    throw std::invalid_argument(
        "willingness_to_pay: t=" + std::to_string(t) + " outside active window [" +
        std::to_string(load.arrival) + ", " + std::to_string(load.deadline) + "] of load " +
        std::to_string(load.id));
  }
  return grid_price - load.criticality * static_cast<Money>(t - load.arrival);
}

Money record_welfare(const MatchRecord& record) {
  return record.utility - record.cost;
}

WelfareBreakdown make_breakdown(std::vector<MatchRecord> records, Money grid_price) {
  WelfareBreakdown b;
  for (const auto& rec : records) {
    if (rec.source == Source::Res) {
      b.w_rs += rec.welfare;
    } else {
      b.w_gs += rec.welfare;
      b.grid_payment -= grid_price;
    }
  }
  b.total = b.w_rs + b.w_gs;
  b.records = std::move(records);
  return b;
}

std::vector<std::string> validate_realization(const Realization& r,
                                              std::optional<int> supply_bound,
                                              std::optional<int> arrivals_bound) {
  std::vector<std::string> issues;
  const int horizon = r.params.horizon;

  if (r.params.grid_price <= 0) {
    issues.push_back("params.grid_price: must be > 0, got " + format_money(r.params.grid_price));
  }
  if (horizon < 1) {
    issues.push_back("params.horizon: must be >= 1, got " + std::to_string(horizon));
  }
  if (static_cast<int>(r.arrivals.size()) != horizon) {
    issues.push_back("arrivals: expected " + std::to_string(horizon) + " steps, got " +
                     std::to_string(r.arrivals.size()));
  }
  if (static_cast<int>(r.supply.size()) != horizon) {
    issues.push_back("supply: expected " + std::to_string(horizon) + " steps, got " +
                     std::to_string(r.supply.size()));
  }

  for (std::size_t i = 0; i < r.supply.size(); ++i) {
    if (r.supply[i] < 0) {
      issues.push_back("supply[t=" + std::to_string(i + 1) + "]: negative (" +
                       std::to_string(r.supply[i]) + ")");
    }
    if (supply_bound && r.supply[i] > *supply_bound) {
      issues.push_back("supply[t=" + std::to_string(i + 1) + "]: " + std::to_string(r.supply[i]) +
                       " exceeds bound " + std::to_string(*supply_bound));
    }
  }

  std::set<int> seen_ids;
  for (std::size_t i = 0; i < r.arrivals.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    if (arrivals_bound && static_cast<int>(r.arrivals[i].size()) > *arrivals_bound) {
      issues.push_back("arrivals[t=" + std::to_string(t) + "]: " +
                       std::to_string(r.arrivals[i].size()) + " loads exceeds bound " +
                       std::to_string(*arrivals_bound));
    }
    for (const LoadSpec& load : r.arrivals[i]) {
      const std::string who = "load " + std::to_string(load.id);
      if (!seen_ids.insert(load.id).second) {
        issues.push_back(who + ": duplicate id");
      }
      if (load.arrival != t) {
        issues.push_back(who + ": listed at step " + std::to_string(t) + " but arrival is " +
                         std::to_string(load.arrival));
      }
      if (load.deadline < load.arrival) {
        issues.push_back(who + ": deadline " + std::to_string(load.deadline) +
                         " before arrival " + std::to_string(load.arrival));
      }
      if (load.deadline > horizon) {
        issues.push_back(who + ": deadline " + std::to_string(load.deadline) +
                         " beyond horizon " + std::to_string(horizon));
      }
      if (load.criticality < 0) {
        issues.push_back(who + ": negative criticality " + format_money(load.criticality));
      }
      // Willingness to pay must stay strictly positive through the deadline.
      const Money pi_at_deadline =
          r.params.grid_price -
          load.criticality * static_cast<Money>(load.deadline - load.arrival);
      if (load.deadline >= load.arrival && pi_at_deadline <= 0) {
        issues.push_back(who + ": willingness to pay reaches " + format_money(pi_at_deadline) +
                         " at its deadline (must stay > 0)");
      }
    }
  }
  return issues;
}

}  // namespace dmm
