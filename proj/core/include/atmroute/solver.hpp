#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atmroute/costing.hpp"
#include "atmroute/instance.hpp"
#include "atmroute/plan.hpp"
#include "atmroute/splitting.hpp"

namespace atmroute {

enum class Neighborhood : unsigned {
  relocate = 1U << 0,
  swap = 1U << 1,
  two_opt = 1U << 2,
  period_move = 1U << 3,
  split_k_change = 1U << 4,
};

inline constexpr unsigned routing_neighborhoods =
  static_cast<unsigned>(Neighborhood::relocate) | static_cast<unsigned>(Neighborhood::swap) |
  static_cast<unsigned>(Neighborhood::two_opt);
inline constexpr unsigned all_neighborhoods =
  routing_neighborhoods | static_cast<unsigned>(Neighborhood::period_move) |
  static_cast<unsigned>(Neighborhood::split_k_change);

struct SolveConfig {
  Weights weights;
  double time_limit = 10.0; // seconds, hard cap
  std::uint64_t seed = 1;
  unsigned neighborhoods = all_neighborhoods;
  // Money per unit of violation: a minute late or over t_max, a km over the
  // horizon limit, a per-mille of capacity, a million VND of shortfall.
  // Defaults to 10x the largest single arc cost; doubled after each restart
  // that ends infeasible.
  std::optional<double> penalty;
  // Search stops after this many consecutive restarts without a new best.
  // The budget is deterministic, so identical inputs give identical plans as
  // long as the time cap is not reached.
  int max_stale_restarts = 25;
  int perturbation_strength = 3;

  bool uses(Neighborhood n) const noexcept {
    return (neighborhoods & static_cast<unsigned>(n)) != 0;
  }
};

// Throws std::invalid_argument when time_limit <= 0 or the weights are invalid.
void validate_config(const SolveConfig& cfg);

enum class SolveStatus { optimal, feasible, infeasible, timeout };

std::string status_name(SolveStatus s);

struct SolveResult {
  Plan plan;
  CostBreakdown cost;
  SolveStatus status = SolveStatus::infeasible;
  std::int64_t iterations = 0;
  double wall_time = 0.0;
  // Weighted cost of the best feasible plan each time it improved.
  std::vector<double> best_trace;
};

// Nearest depot per ATM by c(depot, ATM); ties go to the lower depot index.
std::vector<DepotIndex> assign_depots(const Instance& inst);

struct ExactLimits {
  std::int64_t max_nodes = 200'000'000;
  double time_limit = 60.0;
  Weights weights;
};

inline constexpr int exact_max_atms = 8;
inline constexpr int exact_max_vehicles = 2;
inline constexpr int exact_max_periods = 2;

// Exhaustive branch and bound over route assignments and visiting orders with
// deposits fixed by the schedule's chosen options and depots fixed by
// assign_depots. Throws std::invalid_argument above the size caps.
SolveResult solve_exact(const Instance& inst, const SplitSchedule& schedule,
                        const ExactLimits& limits = {});

// Greedy cheapest insertion per period; the seed breaks ties. A deposit that
// fits nowhere in its period moves to the nearest earlier period that can take
// it, else to a later one that keeps the balance nonnegative, else it is
// dropped and the plan is left short in inventory only.
Plan construct_plan(const Instance& inst, const SplitSchedule& schedule, std::uint64_t seed);

// Penalized first-improvement local search with restarts. `options` enables
// the split_k_change neighborhood; without it that neighborhood is skipped.
SolveResult improve_plan(const Instance& inst, const Plan& plan, const SolveConfig& cfg,
                         const SplitSchedule* options = nullptr);

// construct_plan followed by improve_plan.
SolveResult solve(const Instance& inst, const SplitSchedule& schedule, const SolveConfig& cfg);

// True when a is no worse than b in both objectives and strictly better in one.
bool dominates(const CostBreakdown& a, const CostBreakdown& b);

struct ParetoPoint {
  Weights weights;
  SolveResult result;
};

// Full pipeline per weight pair, filtered to the non-dominated feasible
// results, sorted by transport cost ascending. Needs at least two pairs.
std::vector<ParetoPoint> pareto_sweep(const Instance& inst, const SplitSchedule& schedule,
                                      const std::vector<Weights>& weights,
                                      const SolveConfig& base);

} // namespace atmroute
