#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "atmroute/instance.hpp"

namespace atmroute {

enum class SplitMode { no_split, split };

// Bounds on a single deposit when a large order is split into smaller ones.
struct SplitPolicy {
  Money lower = 1;
  Money upper = 1;
  SplitMode mode = SplitMode::no_split;
};

// Policy from the instance's split bounds. Throws std::invalid_argument in
// split mode when the instance carries no bounds or 0 < L <= U fails.
SplitPolicy make_policy(const Instance& inst, SplitMode mode);

struct SplitOption {
  int parts = 1;
  std::vector<Money> amounts; // near-equal, larger parts first

  bool operator==(const SplitOption&) const = default;
};

// Split mode: one option per k in [ceil(total/U), floor(total/L)].
// No-split mode: the single option k = 1. Throws std::invalid_argument for
// total <= 0.
std::vector<SplitOption> enumerate_splits(Money total, const SplitPolicy& policy);

// Near-equal integer partition of total into k parts.
std::vector<Money> near_equal_parts(Money total, int k);

struct DepositSchedule {
  std::vector<Money> deposits; // d_jt per period
  bool feasible = true;        // false: no placement keeps the balance nonnegative
};

// Places each amount as late as the running balance allows. Among all
// placements that keep the balance nonnegative, returns one minimising the
// sum of end-of-period balances. When none exists every amount goes to the
// first period and `feasible` is false.
DepositSchedule schedule_deposits(const Instance& inst, const Atm& atm,
                                  const std::vector<Money>& amounts);

// Sum of end-of-period balances for one ATM under the given deposits.
Money balance_days(const Atm& atm, const std::vector<Money>& deposits);

struct ScheduledOption {
  SplitOption split;
  std::vector<Money> deposits;
  bool feasible = true;
  Money balance_days = 0; // financial proxy

  bool operator==(const ScheduledOption&) const = default;
};

struct AtmSchedule {
  std::vector<ScheduledOption> options;
  int chosen = -1; // proxy-best option; -1 when the ATM has no demand

  bool excluded() const noexcept {
    return options.empty();
  }
  bool operator==(const AtmSchedule&) const = default;
};

struct SplitSchedule {
  SplitPolicy policy;
  int periods = 0;
  std::vector<AtmSchedule> atms;
  std::vector<Defect> warnings;

  Money deposit(AtmIndex a, Period t) const;
  std::vector<Money> deposits(AtmIndex a) const;
};

// Every split option per ATM, scheduled and scored by the financial proxy;
// `chosen` marks the cheapest (ties: fewer parts). ATMs without a feasible k
// in split mode fall back to k = 1 with a warning.
SplitSchedule build_split_schedule(const Instance& inst, const SplitPolicy& policy);

std::string serialize_schedule(const Instance& inst, const SplitSchedule& schedule);
SplitSchedule parse_schedule(const Instance& inst, std::string_view text);

} // namespace atmroute
