#pragma once

// Mutable routing state shared by the construction and improvement stages.
// Violations are kept in integer units so that sums stay exact:
// minutes for windows, route time and return, per-mille of capacity for
// overload, whole km over the horizon limit, whole million VND of shortfall.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "atmroute/costing.hpp"
#include "atmroute/plan.hpp"
#include "atmroute/splitting.hpp"

namespace atmroute::detail {

struct RouteEval {
  Money cost = 0;
  Meters meters = 0;
  std::int64_t violation = 0;
};

inline std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  return (num + den - 1) / den;
}

// Route of vehicle h through the ATMs `s`, departing at the depot opening.
// `deposit(a)` gives the amount dropped at ATM a.
template <class DepositOf>
RouteEval evaluate_route(const Instance& inst, VehicleIndex h, const std::vector<AtmIndex>& s,
                         DepositOf&& deposit) {
  RouteEval ev;
  if (s.empty()) {
    return ev;
  }
  const auto& vehicle = inst.vehicles[static_cast<std::size_t>(h)];
  const NodeIndex depot = vehicle.home_depot;
  ev.cost = vehicle.fixed_cost_per_trip;
  Minutes time = inst.depot_window.open;
  Minutes travel = 0;
  Money load = 0;
  NodeIndex prev = depot;
  auto leg = [&](NodeIndex to) {
    ev.cost += inst.arc_cost(h, prev, to);
    ev.meters += inst.distance(static_cast<std::size_t>(prev), static_cast<std::size_t>(to));
    const Minutes tr = inst.travel(h, prev, to);
    travel += tr;
    prev = to;
    return tr;
  };
  for (AtmIndex a : s) {
    const auto& atm = inst.atms[static_cast<std::size_t>(a)];
    const Minutes arrival = time + leg(inst.atm_node(a));
    const Minutes start = std::max(arrival, atm.service_window.open);
    if (start > atm.service_window.close) {
      ev.violation += start - atm.service_window.close;
    }
    time = start + atm.service_time;
    load += deposit(a);
  }
  const Minutes back = time + leg(depot);
  if (back > inst.depot_window.close) {
    ev.violation += back - inst.depot_window.close;
  }
  if (travel > inst.max_route_time) {
    ev.violation += travel - inst.max_route_time;
  }
  if (load > vehicle.capacity) {
    ev.violation += vehicle.capacity > 0 ? ceil_div((load - vehicle.capacity) * 1000, vehicle.capacity)
                                         : ceil_div(load, 1'000'000);
  }
  return ev;
}

class SearchState {
public:
  struct Change {
    std::vector<std::pair<int, std::vector<AtmIndex>>> routes; // slot -> new sequence
    std::optional<std::pair<AtmIndex, std::vector<Money>>> deposits;
  };

  SearchState(const Instance& inst, std::vector<DepotIndex> depot_of, Weights weights);

  const Instance& instance() const noexcept {
    return *inst_;
  }
  int periods() const noexcept {
    return inst_->periods;
  }
  int slot(VehicleIndex h, Period t) const noexcept {
    return h * inst_->periods + t;
  }
  VehicleIndex vehicle_of_slot(int s) const noexcept {
    return s / inst_->periods;
  }
  Period period_of_slot(int s) const noexcept {
    return s % inst_->periods;
  }

  const std::vector<AtmIndex>& seq(VehicleIndex h, Period t) const {
    return seqs_[static_cast<std::size_t>(slot(h, t))];
  }
  Money deposit(AtmIndex a, Period t) const {
    return deposits_[static_cast<std::size_t>(a * inst_->periods + t)];
  }
  std::vector<Money> deposits(AtmIndex a) const;
  // Vehicle serving (a, t), or -1.
  VehicleIndex server(AtmIndex a, Period t) const {
    return server_[static_cast<std::size_t>(a * inst_->periods + t)];
  }
  DepotIndex depot_of(AtmIndex a) const {
    return depot_of_[static_cast<std::size_t>(a)];
  }
  const std::vector<VehicleIndex>& fleet(DepotIndex d) const {
    return fleet_[static_cast<std::size_t>(d)];
  }
  const RouteEval& route_eval(int s) const {
    return evals_[static_cast<std::size_t>(s)];
  }

  // Raw setters; call refresh() afterwards.
  void set_seq(VehicleIndex h, Period t, std::vector<AtmIndex> s) {
    seqs_[static_cast<std::size_t>(slot(h, t))] = std::move(s);
  }
  void set_deposit(AtmIndex a, Period t, Money d) {
    deposits_[static_cast<std::size_t>(a * inst_->periods + t)] = d;
  }
  void refresh();

  RouteEval evaluate(VehicleIndex h, Period t, const std::vector<AtmIndex>& s,
                     const std::pair<AtmIndex, std::vector<Money>>* override_deposits = nullptr) const;

  double objective_after(const Change& c, double penalty) const;
  void apply(const Change& c);

  double objective(double penalty) const {
    return base_objective() + penalty * static_cast<double>(violation());
  }
  // Weighted cost with the search weights, no penalty.
  double base_objective() const;
  std::int64_t violation() const noexcept {
    return route_violation_ + horizon_violation_ + inventory_violation_;
  }
  Money transport() const noexcept {
    return transport_;
  }
  Meters vehicle_meters(VehicleIndex h) const {
    return meters_[static_cast<std::size_t>(h)];
  }
  std::int64_t horizon_excess(Meters meters) const;
  std::int64_t inventory_units(AtmIndex a, const std::vector<Money>& deposits) const;

  Plan to_plan() const;

private:
  const Instance* inst_;
  std::vector<DepotIndex> depot_of_;
  std::vector<std::vector<VehicleIndex>> fleet_;
  double w_transport_;
  double w_financial_;

  std::vector<std::vector<AtmIndex>> seqs_;
  std::vector<Money> deposits_;
  std::vector<VehicleIndex> server_;
  std::vector<RouteEval> evals_;
  std::vector<Meters> meters_;
  std::vector<std::int64_t> inventory_;
  Money transport_ = 0;
  std::int64_t route_violation_ = 0;
  std::int64_t horizon_violation_ = 0;
  std::int64_t inventory_violation_ = 0;
  Money coefficient_ = 0;
};

// Search weights: each weight floored at a tiny positive value so that an
// endpoint weight pair never settles on a weakly dominated plan.
Weights effective_weights(Weights w);

// State with the schedule's chosen deposits and no routes yet.
SearchState initial_state(const Instance& inst, const SplitSchedule& schedule, Weights weights);

// Largest single-arc cost over all vehicles; at least 1.
Money max_arc_cost(const Instance& inst);

} // namespace atmroute::detail
