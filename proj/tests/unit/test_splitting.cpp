#include <gtest/gtest.h>

#include <numeric>

#include "atmroute/splitting.hpp"
#include "builders.hpp"

using namespace atmtest;

namespace {

constexpr Money billion = 1'000'000'000;

SplitPolicy default_bounds(SplitMode mode = SplitMode::split) {
  return {billion, 1'400'000'000, mode};
}

Atm make_atm(Money initial, std::vector<Money> m) {
  Atm a;
  a.id = "1";
  a.initial_balance = initial;
  a.forecast_withdrawals = std::move(m);
  a.service_window = {480, 1020};
  return a;
}

Instance horizon(int periods) {
  std::vector<Money> zero(static_cast<std::size_t>(periods), 0);
  return InstanceBuilder(periods).depot(0, 0).atm(0, zero, 1, 0).vehicle(0).build();
}

// Every placement of the amounts; the lowest balance sum among those that
// keep the balance nonnegative, or nullopt.
std::optional<Money> best_placement(const Atm& atm, const std::vector<Money>& amounts, int periods) {
  std::optional<Money> best;
  std::vector<int> slot(amounts.size(), 0);
  while (true) {
    std::vector<Money> d(static_cast<std::size_t>(periods), 0);
    for (std::size_t i = 0; i < amounts.size(); ++i) {
      d[static_cast<std::size_t>(slot[i])] += amounts[i];
    }
    Money b = atm.initial_balance;
    bool ok = true;
    for (int t = 0; t < periods; ++t) {
      b += d[static_cast<std::size_t>(t)] - atm.forecast_withdrawals[static_cast<std::size_t>(t)];
      ok = ok && b >= 0;
    }
    if (ok) {
      const Money s = balance_days(atm, d);
      best = best ? std::min(*best, s) : s;
    }
    std::size_t i = 0;
    while (i < slot.size() && ++slot[i] == periods) {
      slot[i++] = 0;
    }
    if (i == slot.size()) {
      return best;
    }
  }
}

} // namespace

TEST(EnumerateSplits, ThreeBillion) {
  const auto opts = enumerate_splits(3 * billion, default_bounds());
  ASSERT_EQ(opts.size(), 1U);
  EXPECT_EQ(opts[0].parts, 3);
  EXPECT_EQ(opts[0].amounts, (std::vector<Money>{billion, billion, billion}));
}

TEST(EnumerateSplits, TwoAndAHalfBillion) {
  const auto opts = enumerate_splits(2'500'000'000, default_bounds());
  ASSERT_EQ(opts.size(), 1U);
  EXPECT_EQ(opts[0].amounts, (std::vector<Money>{1'250'000'000, 1'250'000'000}));
}

TEST(EnumerateSplits, BelowLowerBound) {
  EXPECT_TRUE(enumerate_splits(900'000'000, default_bounds()).empty());
}

TEST(EnumerateSplits, GapBetweenTwoAndThreeParts) {
  // 2.9B: two parts exceed 1.4B, three parts fall under 1.0B
  EXPECT_TRUE(enumerate_splits(2'900'000'000, default_bounds()).empty());
}

TEST(EnumerateSplits, SeveralOptions) {
  const auto opts = enumerate_splits(4 * billion, {billion, 2 * billion, SplitMode::split});
  ASSERT_EQ(opts.size(), 3U);
  EXPECT_EQ(opts[0].parts, 2);
  EXPECT_EQ(opts[2].parts, 4);
}

TEST(EnumerateSplits, NoSplitIsSingleDeposit) {
  const auto opts = enumerate_splits(3 * billion, default_bounds(SplitMode::no_split));
  ASSERT_EQ(opts.size(), 1U);
  EXPECT_EQ(opts[0].amounts, std::vector<Money>{3 * billion});
}

TEST(EnumerateSplits, NonPositiveTotalThrows) {
  EXPECT_THROW(enumerate_splits(0, default_bounds()), std::invalid_argument);
  EXPECT_THROW(enumerate_splits(-5, default_bounds()), std::invalid_argument);
}

TEST(EnumerateSplits, PartsAreInBoundsAndConserve) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 5000; ++k) {
    const Money lower = uniform(rng, 1, 1000);
    const Money upper = lower + uniform(rng, 0, 1000);
    const Money total = uniform(rng, 1, 20'000);
    for (const auto& o : enumerate_splits(total, {lower, upper, SplitMode::split})) {
      ASSERT_EQ(std::accumulate(o.amounts.begin(), o.amounts.end(), Money{0}), total);
      for (Money x : o.amounts) {
        ASSERT_GE(x, lower);
        ASSERT_LE(x, upper);
      }
    }
  }
}

TEST(NearEqualParts, LargerFirstAndWithinOne) {
  EXPECT_EQ(near_equal_parts(10, 3), (std::vector<Money>{4, 3, 3}));
  EXPECT_EQ(near_equal_parts(9, 3), (std::vector<Money>{3, 3, 3}));
}

TEST(MakePolicy, NeedsBoundsForSplitting) {
  const Instance inst = horizon(2);
  EXPECT_THROW(make_policy(inst, SplitMode::split), std::invalid_argument);
  const SplitPolicy whole = make_policy(inst, SplitMode::no_split);
  EXPECT_EQ(whole.mode, SplitMode::no_split);
}

TEST(ScheduleDeposits, SinglePeriod) {
  const Instance inst = horizon(1);
  const auto s = schedule_deposits(inst, make_atm(0, {70}), {70});
  EXPECT_TRUE(s.feasible);
  EXPECT_EQ(s.deposits, std::vector<Money>{70});
}

TEST(ScheduleDeposits, EveryDayNeedsItsDeposit) {
  const Instance inst = horizon(2);
  const auto s = schedule_deposits(inst, make_atm(0, {50, 50}), {50, 50});
  EXPECT_TRUE(s.feasible);
  EXPECT_EQ(s.deposits, (std::vector<Money>{50, 50}));
}

TEST(ScheduleDeposits, LatestFeasiblePlacement) {
  const Instance inst = horizon(3);
  const auto s = schedule_deposits(inst, make_atm(100, {50, 50, 50}), {50});
  EXPECT_TRUE(s.feasible);
  EXPECT_EQ(s.deposits, (std::vector<Money>{0, 0, 50}));
}

TEST(ScheduleDeposits, InfeasibleGoesFirstAndIsFlagged) {
  const Instance inst = horizon(3);
  const auto s = schedule_deposits(inst, make_atm(0, {50, 50, 50}), {40});
  EXPECT_FALSE(s.feasible);
  EXPECT_EQ(s.deposits, (std::vector<Money>{40, 0, 0}));
}

TEST(ScheduleDeposits, MatchesExhaustivePlacement) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 3000; ++k) {
    const int p = static_cast<int>(uniform(rng, 1, 5));
    const Instance inst = horizon(p);
    std::vector<Money> m;
    for (int t = 0; t < p; ++t) {
      m.push_back(uniform(rng, 0, 60));
    }
    const Atm atm = make_atm(uniform(rng, 0, 80), m);
    std::vector<Money> amounts;
    const auto n = uniform(rng, 1, 4);
    for (int i = 0; i < n; ++i) {
      amounts.push_back(uniform(rng, 1, 70));
    }
    const auto s = schedule_deposits(inst, atm, amounts);
    const auto best = best_placement(atm, amounts, p);
    ASSERT_EQ(s.feasible, best.has_value()) << k;
    ASSERT_EQ(std::accumulate(s.deposits.begin(), s.deposits.end(), Money{0}),
              std::accumulate(amounts.begin(), amounts.end(), Money{0}));
    if (best) {
      ASSERT_EQ(balance_days(atm, s.deposits), *best) << k;
    }
  }
}

TEST(BuildSplitSchedule, NoSplitSingleDeposit) {
  const Instance inst = small_scenario(5, 10, 2, 2, 7);
  const auto s = build_split_schedule(inst, make_policy(inst, SplitMode::no_split));
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    const auto d = s.deposits(a);
    EXPECT_EQ(std::count_if(d.begin(), d.end(), [](Money x) { return x != 0; }), 1);
    EXPECT_EQ(std::accumulate(d.begin(), d.end(), Money{0}), inst.atms[static_cast<std::size_t>(a)].total_demand);
  }
}

TEST(BuildSplitSchedule, SplittingLowersTheHoldingCost) {
  // 3.0B withdrawn evenly over seven days, first day already stocked
  std::vector<Money> m(7, 3 * billion / 7);
  m[0] += 3 * billion - 7 * (3 * billion / 7);
  const Instance inst = InstanceBuilder(7)
                          .depot(0, 0)
                          .atm(m[0], m, 1, 0, {480, 1020}, 10, 3 * billion)
                          .vehicle(0)
                          .bounds(billion, 1'400'000'000)
                          .build();
  const auto whole = build_split_schedule(inst, make_policy(inst, SplitMode::no_split));
  const auto split = build_split_schedule(inst, make_policy(inst, SplitMode::split));
  const auto& chosen = split.atms[0].options[static_cast<std::size_t>(split.atms[0].chosen)];
  EXPECT_EQ(chosen.split.parts, 3);
  EXPECT_TRUE(chosen.feasible);
  EXPECT_LT(chosen.balance_days, whole.atms[0].options[0].balance_days);
  EXPECT_TRUE(split.warnings.empty());
}

TEST(BuildSplitSchedule, ZeroDemandExcluded) {
  const Instance inst = InstanceBuilder(3).depot(0, 0).atm(100, {10, 10, 10}, 1, 0).vehicle(0).build();
  const auto s = build_split_schedule(inst, make_policy(inst, SplitMode::no_split));
  EXPECT_TRUE(s.atms[0].excluded());
  EXPECT_EQ(s.atms[0].chosen, -1);
  EXPECT_EQ(s.deposits(0), (std::vector<Money>{0, 0, 0}));
}

TEST(BuildSplitSchedule, NoFeasibleCountFallsBackWithWarning) {
  const Instance inst = InstanceBuilder(2)
                          .depot(0, 0)
                          .atm(0, {2 * billion, 900'000'000}, 1, 0, {480, 1020}, 10, 2'900'000'000)
                          .vehicle(0)
                          .bounds(billion, 1'400'000'000)
                          .build();
  const auto s = build_split_schedule(inst, make_policy(inst, SplitMode::split));
  ASSERT_EQ(s.warnings.size(), 1U);
  EXPECT_EQ(s.atms[0].options.size(), 1U);
  EXPECT_EQ(s.atms[0].options[0].split.parts, 1);
}

TEST(BuildSplitSchedule, ConservationBoundsAndDeterminism) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    ScenarioParams p;
    p.seed = seed;
    const Instance inst = generate_scenario(p);
    const auto policy = make_policy(inst, SplitMode::split);
    const auto s = build_split_schedule(inst, policy);
    for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
      const auto& atm_sched = s.atms[static_cast<std::size_t>(a)];
      const auto d = s.deposits(a);
      ASSERT_EQ(std::accumulate(d.begin(), d.end(), Money{0}), inst.atms[static_cast<std::size_t>(a)].total_demand);
      const bool fallback = enumerate_splits(inst.atms[static_cast<std::size_t>(a)].total_demand, policy).empty();
      for (Money x : d) {
        if (x != 0 && !fallback) {
          ASSERT_GE(x, policy.lower);
          ASSERT_LE(x, policy.upper);
        }
      }
      for (const auto& o : atm_sched.options) {
        EXPECT_LE(atm_sched.options[static_cast<std::size_t>(atm_sched.chosen)].balance_days, o.balance_days);
      }
    }
    const auto again = build_split_schedule(inst, policy);
    EXPECT_EQ(again.atms, s.atms);
  }
}

TEST(ScheduleDocument, RoundTrip) {
  ScenarioParams p;
  p.seed = 3;
  const Instance inst = generate_scenario(p);
  const auto s = build_split_schedule(inst, make_policy(inst, SplitMode::split));
  const auto back = parse_schedule(inst, serialize_schedule(inst, s));
  EXPECT_EQ(back.atms, s.atms);
  EXPECT_EQ(back.periods, s.periods);
  EXPECT_EQ(back.policy.lower, s.policy.lower);
  EXPECT_EQ(back.warnings.size(), s.warnings.size());
}

TEST(ScheduleDocument, RejectsForeignInstance) {
  ScenarioParams p;
  const Instance inst = generate_scenario(p);
  const auto text = serialize_schedule(inst, build_split_schedule(inst, make_policy(inst, SplitMode::split)));
  p.n_atms = 5;
  EXPECT_THROW(parse_schedule(generate_scenario(p), text), InputError);
}
