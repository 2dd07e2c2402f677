#include <chrono>
#include <limits>
#include <stdexcept>

#include "atmroute/solver.hpp"
#include "search_state.hpp"

namespace atmroute {

namespace {

using Clock = std::chrono::steady_clock;

struct Label {
  Money cost = 0;
  Meters meters = 0;
  std::vector<AtmIndex> seq;
};

// Shortest routes of one vehicle over one ATM subset, kept as a Pareto list
// in (cost, meters) because the horizon distance limit couples periods.
class RouteEnumerator {
public:
  RouteEnumerator(const Instance& inst, const ExactLimits& limits, Clock::time_point deadline)
    : inst_(inst), limits_(limits), deadline_(deadline) {
  }

  bool aborted() const noexcept {
    return aborted_;
  }
  std::int64_t nodes() const noexcept {
    return nodes_;
  }

  std::vector<Label> routes(VehicleIndex h, unsigned mask, const std::vector<Money>& deposit_at_t) {
    std::vector<Label> front;
    if (mask == 0) {
      front.push_back({});
      return front;
    }
    const auto& vehicle = inst_.vehicles[static_cast<std::size_t>(h)];
    Money load = 0;
    for (AtmIndex a = 0; a < inst_.atm_count(); ++a) {
      if (mask & (1U << a)) {
        load += deposit_at_t[static_cast<std::size_t>(a)];
      }
    }
    if (load > vehicle.capacity) {
      return front;
    }
    h_ = h;
    front_ = &front;
    seq_.clear();
    dfs(mask, vehicle.home_depot, inst_.depot_window.open, 0, vehicle.fixed_cost_per_trip, 0);
    return front;
  }

private:
  void dfs(unsigned remaining, NodeIndex prev, Minutes time, Minutes travel, Money cost, Meters meters) {
    if (aborted_) {
      return;
    }
    if ((++nodes_ & 1023) == 0 && (nodes_ > limits_.max_nodes || Clock::now() >= deadline_)) {
      aborted_ = true;
      return;
    }
    const auto& vehicle = inst_.vehicles[static_cast<std::size_t>(h_)];
    if (remaining == 0) {
      const NodeIndex depot = vehicle.home_depot;
      const Minutes tr = inst_.travel(h_, prev, depot);
      const Meters m = meters + inst_.distance(static_cast<std::size_t>(prev), static_cast<std::size_t>(depot));
      if (time + tr > inst_.depot_window.close || travel + tr > inst_.max_route_time) {
        return;
      }
      if (inst_.max_total_distance && m > *inst_.max_total_distance) {
        return;
      }
      insert({cost + inst_.arc_cost(h_, prev, depot), m, seq_});
      return;
    }
    for (AtmIndex a = 0; a < inst_.atm_count(); ++a) {
      if (!(remaining & (1U << a))) {
        continue;
      }
      const auto& atm = inst_.atms[static_cast<std::size_t>(a)];
      const NodeIndex n = inst_.atm_node(a);
      const Minutes tr = inst_.travel(h_, prev, n);
      const Minutes start = std::max(time + tr, atm.service_window.open);
      if (start > atm.service_window.close || travel + tr > inst_.max_route_time) {
        continue;
      }
      seq_.push_back(a);
      dfs(remaining & ~(1U << a), n, start + atm.service_time, travel + tr,
          cost + inst_.arc_cost(h_, prev, n),
          meters + inst_.distance(static_cast<std::size_t>(prev), static_cast<std::size_t>(n)));
      seq_.pop_back();
    }
  }

  void insert(Label label) {
    auto& front = *front_;
    for (const auto& l : front) {
      if (l.cost <= label.cost && l.meters <= label.meters) {
        return;
      }
    }
    std::erase_if(front, [&](const Label& l) { return label.cost <= l.cost && label.meters <= l.meters; });
    front.push_back(std::move(label));
  }

  const Instance& inst_;
  const ExactLimits& limits_;
  Clock::time_point deadline_;
  VehicleIndex h_ = 0;
  std::vector<Label>* front_ = nullptr;
  std::vector<AtmIndex> seq_;
  std::int64_t nodes_ = 0;
  bool aborted_ = false;
};

// One way to run a whole period: a label per vehicle.
struct PeriodOption {
  Money cost = 0;
  std::vector<Meters> meters;               // per vehicle
  std::vector<const Label*> labels;         // per vehicle
};

} // namespace

SolveResult solve_exact(const Instance& inst, const SplitSchedule& schedule, const ExactLimits& limits) {
  if (inst.atm_count() > exact_max_atms || inst.vehicle_count() > exact_max_vehicles ||
      inst.periods > exact_max_periods) {
    throw std::invalid_argument("instance exceeds the exact solver limits (A <= 8, H <= 2, p <= 2)");
  }
  if (schedule.periods != inst.periods || schedule.atms.size() != inst.atms.size()) {
    throw std::invalid_argument("schedule does not match the instance");
  }
  const auto start = Clock::now();
  const auto deadline =
    start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(limits.time_limit));
  const auto depot_of = assign_depots(inst);
  const int H = inst.vehicle_count();
  const int p = inst.periods;

  RouteEnumerator enumerator(inst, limits, deadline);
  // Labels live here so PeriodOption pointers stay valid.
  std::vector<std::vector<std::vector<Label>>> memo(static_cast<std::size_t>(H * p));
  std::vector<std::vector<PeriodOption>> options(static_cast<std::size_t>(p));
  bool infeasible = false;

  for (Period t = 0; t < p && !infeasible; ++t) {
    std::vector<Money> dep(inst.atms.size());
    std::vector<AtmIndex> required;
    for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
      dep[static_cast<std::size_t>(a)] = schedule.deposit(a, t);
      if (dep[static_cast<std::size_t>(a)] > 0) {
        required.push_back(a);
      }
    }
    const unsigned full = 1U << inst.atm_count();
    for (VehicleIndex h = 0; h < H; ++h) {
      auto& table = memo[static_cast<std::size_t>(h * p + t)];
      table.resize(full);
      const DepotIndex home = inst.vehicles[static_cast<std::size_t>(h)].home_depot;
      unsigned eligible = 0;
      for (AtmIndex a : required) {
        if (depot_of[static_cast<std::size_t>(a)] == home) {
          eligible |= 1U << a;
        }
      }
      // Every submask of the eligible set, including the empty one.
      for (unsigned m = eligible;; m = (m - 1) & eligible) {
        table[m] = enumerator.routes(h, m, dep);
        if (m == 0) {
          break;
        }
      }
    }

    // Assign each required ATM to a vehicle of its depot.
    std::vector<unsigned> masks(static_cast<std::size_t>(H), 0);
    auto assign = [&](auto&& self, std::size_t k) -> void {
      if (k == required.size()) {
        std::vector<const std::vector<Label>*> lists;
        for (VehicleIndex h = 0; h < H; ++h) {
          const auto& list = memo[static_cast<std::size_t>(h * p + t)][masks[static_cast<std::size_t>(h)]];
          if (list.empty()) {
            return;
          }
          lists.push_back(&list);
        }
        PeriodOption option;
        option.meters.assign(static_cast<std::size_t>(H), 0);
        option.labels.assign(static_cast<std::size_t>(H), nullptr);
        auto product = [&](auto&& inner, VehicleIndex h) -> void {
          if (h == H) {
            options[static_cast<std::size_t>(t)].push_back(option);
            return;
          }
          for (const Label& l : *lists[static_cast<std::size_t>(h)]) {
            option.cost += l.cost;
            option.meters[static_cast<std::size_t>(h)] = l.meters;
            option.labels[static_cast<std::size_t>(h)] = &l;
            inner(inner, h + 1);
            option.cost -= l.cost;
          }
        };
        product(product, 0);
        return;
      }
      const AtmIndex a = required[k];
      for (VehicleIndex h = 0; h < H; ++h) {
        if (inst.vehicles[static_cast<std::size_t>(h)].home_depot == depot_of[static_cast<std::size_t>(a)]) {
          masks[static_cast<std::size_t>(h)] |= 1U << a;
          self(self, k + 1);
          masks[static_cast<std::size_t>(h)] &= ~(1U << a);
        }
      }
    };
    assign(assign, 0);
    if (options[static_cast<std::size_t>(t)].empty()) {
      infeasible = true;
    }
  }

  // Pick one option per period under the horizon distance limit.
  Money best_cost = std::numeric_limits<Money>::max();
  std::vector<const PeriodOption*> best(static_cast<std::size_t>(p), nullptr);
  if (!infeasible && !enumerator.aborted()) {
    std::vector<Money> floor_cost(static_cast<std::size_t>(p + 1), 0);
    for (Period t = p - 1; t >= 0; --t) {
      Money m = std::numeric_limits<Money>::max();
      for (const auto& o : options[static_cast<std::size_t>(t)]) {
        m = std::min(m, o.cost);
      }
      floor_cost[static_cast<std::size_t>(t)] = floor_cost[static_cast<std::size_t>(t + 1)] + m;
    }
    std::vector<const PeriodOption*> chosen(static_cast<std::size_t>(p), nullptr);
    std::vector<Meters> used(static_cast<std::size_t>(H), 0);
    auto pick = [&](auto&& self, Period t, Money cost) -> void {
      if (t == p) {
        if (cost < best_cost) {
          best_cost = cost;
          best = chosen;
        }
        return;
      }
      for (const auto& o : options[static_cast<std::size_t>(t)]) {
        if (cost + o.cost + floor_cost[static_cast<std::size_t>(t + 1)] >= best_cost) {
          continue;
        }
        bool fits = true;
        for (VehicleIndex h = 0; h < H; ++h) {
          if (inst.max_total_distance &&
              used[static_cast<std::size_t>(h)] + o.meters[static_cast<std::size_t>(h)] > *inst.max_total_distance) {
            fits = false;
          }
        }
        if (!fits) {
          continue;
        }
        for (VehicleIndex h = 0; h < H; ++h) {
          used[static_cast<std::size_t>(h)] += o.meters[static_cast<std::size_t>(h)];
        }
        chosen[static_cast<std::size_t>(t)] = &o;
        self(self, t + 1, cost + o.cost);
        for (VehicleIndex h = 0; h < H; ++h) {
          used[static_cast<std::size_t>(h)] -= o.meters[static_cast<std::size_t>(h)];
        }
      }
    };
    pick(pick, 0, 0);
  }

  SolveResult result;
  result.plan = Plan(inst);
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    for (Period t = 0; t < p; ++t) {
      result.plan.deposit(a, t) = schedule.deposit(a, t);
    }
  }
  const bool found = best_cost != std::numeric_limits<Money>::max();
  if (found) {
    for (Period t = 0; t < p; ++t) {
      for (VehicleIndex h = 0; h < H; ++h) {
        Route& r = result.plan.route(h, t);
        r.nodes = closed_route(inst, h, best[static_cast<std::size_t>(t)]->labels[static_cast<std::size_t>(h)]->seq);
        r.departure = r.nodes.empty() ? 0 : inst.depot_window.open;
      }
    }
  }
  derive_plan_bookkeeping(inst, result.plan);
  result.cost = aggregate_cost(inst, result.plan, limits.weights);
  result.iterations = enumerator.nodes();
  if (enumerator.aborted()) {
    result.status = SolveStatus::timeout;
  } else {
    result.status = found ? SolveStatus::optimal : SolveStatus::infeasible;
  }
  result.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

} // namespace atmroute
