#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "atmroute/feasibility.hpp"
#include "atmroute/solver.hpp"
#include "builders.hpp"

using namespace atmtest;

namespace {

SplitSchedule whole_orders(const Instance& inst) {
  return build_split_schedule(inst, make_policy(inst, SplitMode::no_split));
}

// Cheapest feasible transport by trying every vehicle choice (within the
// ATM's assigned depot) and every visiting order in every period.
std::optional<Money> brute_force(const Instance& inst, const SplitSchedule& schedule) {
  const auto depot_of = assign_depots(inst);
  Plan plan(inst);
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    for (Period t = 0; t < inst.periods; ++t) {
      plan.deposit(a, t) = schedule.deposit(a, t);
    }
  }
  std::optional<Money> best;
  auto period = [&](auto&& self, Period t) -> void {
    if (t == inst.periods) {
      Plan p = plan;
      derive_plan_bookkeeping(inst, p);
      if (check_plan(inst, p).empty()) {
        const Money c = transport_cost(inst, p);
        best = best ? std::min(*best, c) : c;
      }
      return;
    }
    std::vector<AtmIndex> due;
    for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
      if (schedule.deposit(a, t) > 0) {
        due.push_back(a);
      }
    }
    std::vector<VehicleIndex> choice(due.size(), 0);
    auto assign = [&](auto&& again, std::size_t k) -> void {
      if (k == due.size()) {
        // every order per vehicle
        std::vector<std::vector<AtmIndex>> groups(static_cast<std::size_t>(inst.vehicle_count()));
        for (std::size_t i = 0; i < due.size(); ++i) {
          groups[static_cast<std::size_t>(choice[i])].push_back(due[i]);
        }
        for (auto& g : groups) {
          std::sort(g.begin(), g.end());
        }
        auto orders = [&](auto&& next, VehicleIndex h) -> void {
          if (h == inst.vehicle_count()) {
            self(self, t + 1);
            return;
          }
          auto g = groups[static_cast<std::size_t>(h)];
          do {
            Route& r = plan.route(h, t);
            r.nodes = closed_route(inst, h, g);
            r.departure = r.nodes.empty() ? 0 : inst.depot_window.open;
            next(next, h + 1);
          } while (std::next_permutation(g.begin(), g.end()));
        };
        orders(orders, 0);
        return;
      }
      for (VehicleIndex h = 0; h < inst.vehicle_count(); ++h) {
        if (inst.vehicles[static_cast<std::size_t>(h)].home_depot == depot_of[static_cast<std::size_t>(due[k])]) {
          choice[k] = h;
          again(again, k + 1);
        }
      }
    };
    assign(assign, 0);
  };
  period(period, 0);
  return best;
}

SolveConfig quick(std::uint64_t seed = 1) {
  SolveConfig cfg;
  cfg.seed = seed;
  cfg.max_stale_restarts = 10;
  return cfg;
}

} // namespace

TEST(AssignDepots, TwoDepotGroups) {
  const Instance inst = load_instance(fixture("two_depot_instance.json"));
  const auto d = assign_depots(inst);
  auto depot_of = [&](const char* id) { return inst.node_id(d[static_cast<std::size_t>(inst.atm_of(*inst.find_node(id)))]); };
  for (const char* id : {"1", "2", "3", "4", "5", "11"}) {
    EXPECT_EQ(depot_of(id), "01") << id;
  }
  for (const char* id : {"6", "8", "12", "16"}) {
    EXPECT_EQ(depot_of(id), "02") << id;
  }
  for (const char* id : {"7", "9", "10", "13", "14", "15"}) {
    EXPECT_EQ(depot_of(id), "03") << id;
  }
}

TEST(AssignDepots, SkipsDepotsWithoutVehicles) {
  const Instance inst = InstanceBuilder(1).depot(0, 0).depot(10, 0).atm(0, {0}, 1, 0).vehicle(1).build();
  EXPECT_EQ(assign_depots(inst), std::vector<DepotIndex>{1});
}

TEST(SolveExact, ThreeAtmsOnALine) {
  // depot at 0, ATMs at 1, 2, 3 km: the best tour is out and back, 6 km
  const Instance inst = InstanceBuilder(1)
                          .depot(0, 0)
                          .atm(0, {10}, 2, 0, {480, 1020}, 10, 10)
                          .atm(0, {10}, 1, 0, {480, 1020}, 10, 10)
                          .atm(0, {10}, 3, 0, {480, 1020}, 10, 10)
                          .vehicle(0, 1000, 1000)
                          .build();
  const auto r = solve_exact(inst, whole_orders(inst));
  EXPECT_EQ(r.status, SolveStatus::optimal);
  EXPECT_EQ(r.cost.transport, 6000);
  EXPECT_TRUE(check_plan(inst, r.plan).empty());
  EXPECT_EQ(brute_force(inst, whole_orders(inst)), r.cost.transport);
}

TEST(SolveExact, WindowsForceTheOrder) {
  // the far ATM closes early, so it must come first
  const Instance inst = InstanceBuilder(1)
                          .depot(0, 0)
                          .atm(0, {10}, 1, 0, {480, 1020}, 10, 10)
                          .atm(0, {10}, 30, 0, {480, 515}, 10, 10)
                          .vehicle(0, 1000, 1000, 60)
                          .depot_window({480, 1080})
                          .build();
  const auto r = solve_exact(inst, whole_orders(inst));
  ASSERT_EQ(r.status, SolveStatus::optimal);
  const auto& nodes = r.plan.route(0, 0).nodes;
  ASSERT_EQ(nodes.size(), 4U);
  EXPECT_EQ(inst.node_id(nodes[1]), "2");
  EXPECT_TRUE(check_plan(inst, r.plan).empty());
}

TEST(SolveExact, InfeasibleWhenCapacityTooSmall) {
  const Instance inst = InstanceBuilder(1)
                          .depot(0, 0)
                          .atm(0, {10}, 1, 0, {480, 1020}, 10, 2000)
                          .vehicle(0, 1000, 1000)
                          .build();
  EXPECT_EQ(solve_exact(inst, whole_orders(inst)).status, SolveStatus::infeasible);
}

TEST(SolveExact, NodeCapGivesTimeout) {
  const Instance inst = small_scenario(4, 8, 1, 2, 1);
  ExactLimits limits;
  limits.max_nodes = 2000;
  EXPECT_EQ(solve_exact(inst, whole_orders(inst), limits).status, SolveStatus::timeout);
}

TEST(SolveExact, SizeCaps) {
  const Instance inst = small_scenario(4, 9, 1, 1, 1);
  EXPECT_THROW(solve_exact(inst, whole_orders(inst)), std::invalid_argument);
  const Instance three = small_scenario(4, 3, 1, 3, 1);
  EXPECT_THROW(solve_exact(three, whole_orders(three)), std::invalid_argument);
}

TEST(SolveExact, MatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int depots = 1 + static_cast<int>(seed % 2);
    const int per_depot = depots == 1 ? 1 + static_cast<int>(seed / 2 % 2) : 1;
    Instance inst = small_scenario(seed, 2 + static_cast<int>(seed % 2), depots, per_depot, 1 + static_cast<int>(seed / 3 % 2));
    if (seed % 4 == 0) {
      inst.max_total_distance = km_to_meters(35.0); // sometimes binding
    }
    const auto schedule = whole_orders(inst);
    const auto r = solve_exact(inst, schedule);
    const auto oracle = brute_force(inst, schedule);
    ASSERT_EQ(r.status == SolveStatus::optimal, oracle.has_value()) << seed;
    if (oracle) {
      EXPECT_EQ(r.cost.transport, *oracle) << seed;
      EXPECT_TRUE(check_plan(inst, r.plan).empty()) << seed;
    }
  }
}

TEST(ConstructPlan, DeliversTheSchedule) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = small_scenario(seed, 12, 2, 2, 4);
    const auto schedule = build_split_schedule(inst, make_policy(inst, SplitMode::split));
    const Plan plan = construct_plan(inst, schedule, seed);
    EXPECT_TRUE(check_plan(inst, plan).empty()) << seed;
    for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
      for (Period t = 0; t < inst.periods; ++t) {
        EXPECT_EQ(plan.deposit(a, t), schedule.deposit(a, t));
      }
    }
  }
}

TEST(ConstructPlan, MovesDepositsEarlierWhenAPeriodIsFull) {
  // one small vehicle: day 2 cannot take both deposits, so one moves to day 1
  const Instance inst = InstanceBuilder(2)
                          .depot(0, 0)
                          .atm(0, {0, 100}, 1, 0, {480, 1020}, 10, 100)
                          .atm(0, {0, 100}, 2, 0, {480, 1020}, 10, 100)
                          .vehicle(0, 150, 1000)
                          .build();
  const auto schedule = whole_orders(inst);
  ASSERT_EQ(schedule.deposit(0, 1), 100);
  ASSERT_EQ(schedule.deposit(1, 1), 100);
  const Plan plan = construct_plan(inst, schedule, 1);
  EXPECT_TRUE(check_plan(inst, plan).empty());
  EXPECT_EQ(plan.deposit(0, 0) + plan.deposit(1, 0), 100);
}

TEST(ConstructPlan, SeedOnlyBreaksTies) {
  const Instance inst = small_scenario(9, 10, 2, 2, 3);
  const auto schedule = whole_orders(inst);
  EXPECT_EQ(construct_plan(inst, schedule, 5), construct_plan(inst, schedule, 5));
}

TEST(ImprovePlan, NeverBeatsTheExactOptimum) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Instance inst = small_scenario(seed, 4 + static_cast<int>(seed % 4), 1, 2, 1 + static_cast<int>(seed % 2));
    const auto schedule = whole_orders(inst);
    const auto exact = solve_exact(inst, schedule);
    ASSERT_EQ(exact.status, SolveStatus::optimal) << seed;
    SolveConfig cfg = quick(seed);
    cfg.neighborhoods = routing_neighborhoods;
    const auto r = improve_plan(inst, construct_plan(inst, schedule, seed), cfg, &schedule);
    ASSERT_EQ(r.status, SolveStatus::feasible) << seed;
    EXPECT_GE(r.cost.transport, exact.cost.transport) << seed;
    EXPECT_EQ(r.cost.financial, exact.cost.financial) << seed;
  }
}

TEST(ImprovePlan, RepairsAnEmptyPlan) {
  const Instance inst = small_scenario(3, 10, 2, 2, 3);
  const auto schedule = whole_orders(inst);
  Plan bare(inst);
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    for (Period t = 0; t < inst.periods; ++t) {
      bare.deposit(a, t) = schedule.deposit(a, t);
    }
  }
  const auto r = improve_plan(inst, bare, quick());
  EXPECT_EQ(r.status, SolveStatus::feasible);
  EXPECT_TRUE(check_plan(inst, r.plan).empty());
}

TEST(Solve, FeasibleStatusAgreesWithChecker) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = small_scenario(seed, 6 + static_cast<int>(seed % 10), 2, 2, 2 + static_cast<int>(seed % 5));
    const auto mode = seed % 2 ? SplitMode::split : SplitMode::no_split;
    const auto r = solve(inst, build_split_schedule(inst, make_policy(inst, mode)), quick(seed));
    EXPECT_EQ(r.status == SolveStatus::feasible, check_plan(inst, r.plan).empty()) << seed;
    EXPECT_EQ(r.status, SolveStatus::feasible) << seed;
    EXPECT_EQ(r.cost, aggregate_cost(inst, r.plan, quick().weights));
  }
}

TEST(Solve, DeterministicForFixedSeed) {
  ScenarioParams p;
  p.seed = 4;
  const Instance inst = generate_scenario(p);
  const auto schedule = build_split_schedule(inst, make_policy(inst, SplitMode::split));
  const auto a = solve(inst, schedule, quick(7));
  const auto b = solve(inst, schedule, quick(7));
  EXPECT_EQ(a.plan, b.plan);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.best_trace, b.best_trace);
}

TEST(Solve, BestTraceOnlyImproves) {
  ScenarioParams p;
  p.seed = 2;
  const Instance inst = generate_scenario(p);
  const auto r = solve(inst, build_split_schedule(inst, make_policy(inst, SplitMode::split)), quick());
  ASSERT_FALSE(r.best_trace.empty());
  for (std::size_t k = 1; k < r.best_trace.size(); ++k) {
    EXPECT_LT(r.best_trace[k], r.best_trace[k - 1]);
  }
}

TEST(Solve, SplitChangeKeepsDepositsConserved) {
  ScenarioParams p;
  p.seed = 6;
  const Instance inst = generate_scenario(p);
  const auto schedule = build_split_schedule(inst, make_policy(inst, SplitMode::split));
  const auto r = solve(inst, schedule, quick());
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    Money sum = 0;
    for (Period t = 0; t < inst.periods; ++t) {
      sum += r.plan.deposit(a, t);
    }
    EXPECT_EQ(sum, inst.atms[static_cast<std::size_t>(a)].total_demand);
  }
}

TEST(SolveConfig, Validation) {
  SolveConfig cfg;
  cfg.time_limit = 0;
  EXPECT_THROW(validate_config(cfg), std::invalid_argument);
  cfg = SolveConfig{};
  cfg.weights = {0, 0};
  EXPECT_THROW(validate_config(cfg), std::invalid_argument);
  EXPECT_NO_THROW(validate_config(SolveConfig{}));
}

TEST(Dominates, Definition) {
  CostBreakdown a;
  a.transport = 1;
  a.financial = 2;
  CostBreakdown b = a;
  EXPECT_FALSE(dominates(a, b));
  b.financial = 3;
  EXPECT_TRUE(dominates(a, b));
  EXPECT_FALSE(dominates(b, a));
  b.transport = 0;
  EXPECT_FALSE(dominates(a, b));
}

TEST(ParetoSweep, FrontIsSortedAndNonDominated) {
  ScenarioParams p;
  p.seed = 8;
  const Instance inst = generate_scenario(p);
  const auto schedule = build_split_schedule(inst, make_policy(inst, SplitMode::split));
  const std::vector<Weights> ws{{1, 0}, {0.75, 0.25}, {0.5, 0.5}, {0.25, 0.75}, {0, 1}};
  const auto front = pareto_sweep(inst, schedule, ws, quick());
  ASSERT_FALSE(front.empty());
  for (std::size_t i = 0; i < front.size(); ++i) {
    for (std::size_t j = 0; j < front.size(); ++j) {
      EXPECT_FALSE(dominates(front[i].result.cost, front[j].result.cost));
    }
    if (i > 0) {
      EXPECT_LT(front[i - 1].result.cost.transport, front[i].result.cost.transport);
      EXPECT_GT(front[i - 1].result.cost.financial, front[i].result.cost.financial);
    }
  }
  EXPECT_THROW(pareto_sweep(inst, schedule, {{1, 1}}, quick()), std::invalid_argument);
}
