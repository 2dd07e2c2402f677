#include "atmroute/feasibility.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "atmroute/costing.hpp"
#include "timing.hpp"

namespace atmroute {

namespace detail {

Timeline earliest_times(const Instance& inst, const std::vector<NodeIndex>& nodes, VehicleIndex h,
                        Minutes departure) {
  Timeline tl;
  if (nodes.empty()) {
    return tl;
  }
  Minutes ready = departure;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const Minutes leg = inst.travel(h, nodes[k - 1], nodes[k]);
    tl.travel_time += leg;
    const Minutes arrival = ready + leg;
    const NodeIndex n = nodes[k];
    if (inst.is_atm(n)) {
      const auto& atm = inst.atms[static_cast<std::size_t>(inst.atm_of(n))];
      const Minutes start = std::max(arrival, atm.service_window.open);
      tl.visits.push_back({n, arrival, start});
      ready = start + atm.service_time;
    } else {
      ready = arrival;
    }
  }
  tl.return_time = ready;
  return tl;
}

} // namespace detail

Timeline propagate_times(const Instance& inst, const std::vector<NodeIndex>& route, VehicleIndex h,
                         Minutes departure) {
  if (route.empty()) {
    return {};
  }
  const NodeIndex home = inst.vehicles[static_cast<std::size_t>(h)].home_depot;
  if (route.size() < 2 || route.front() != home || route.back() != home) {
    throw std::invalid_argument("route must start and end at the vehicle's home depot");
  }
  for (NodeIndex n : route) {
    if (!inst.valid_node(n)) {
      throw std::invalid_argument("route references unknown node");
    }
  }
  return detail::earliest_times(inst, route, h, departure);
}

std::string constraint_code(Constraint c) {
  return "C" + std::to_string(static_cast<int>(c));
}

int repeated_visits(const Instance& inst, const std::vector<NodeIndex>& route) {
  int repeats = 0;
  std::vector<NodeIndex> run;
  auto flush = [&] {
    std::sort(run.begin(), run.end());
    for (std::size_t k = 1; k < run.size(); ++k) {
      if (run[k] == run[k - 1]) {
        ++repeats;
      }
    }
    run.clear();
  };
  for (NodeIndex n : route) {
    if (inst.is_atm(n)) {
      run.push_back(n);
    } else {
      flush();
    }
  }
  flush();
  return repeats;
}

bool violates_subtour_subsets(const Instance& inst, const std::vector<NodeIndex>& route) {
  std::vector<NodeIndex> atms;
  for (NodeIndex n : route) {
    if (inst.is_atm(n) && std::find(atms.begin(), atms.end(), n) == atms.end()) {
      atms.push_back(n);
    }
  }
  const auto arcs = route_arcs(route);
  const std::size_t m = atms.size();
  if (m > 20) {
    throw std::invalid_argument("subset enumeration limited to small routes");
  }
  for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
    auto in_set = [&](NodeIndex n) {
      for (std::size_t k = 0; k < m; ++k) {
        if ((mask >> k & 1U) && atms[k] == n) {
          return true;
        }
      }
      return false;
    };
    int inside = 0;
    for (const auto& a : arcs) {
      if (in_set(a.from) && in_set(a.to)) {
        ++inside;
      }
    }
    const int size = std::popcount(mask);
    if (inside > size - 1) {
      return true;
    }
  }
  return false;
}

namespace {

Location atm_at(AtmIndex a, Period t) {
  return {Location::Kind::atm, a, t};
}
Location vehicle_at(VehicleIndex h, std::optional<Period> t) {
  return {Location::Kind::vehicle, h, t};
}

} // namespace

std::vector<Violation> check_plan(const Instance& inst, const Plan& plan) {
  if (plan.vehicle_count() != inst.vehicle_count() || plan.atm_count() != inst.atm_count() ||
      plan.periods() != inst.periods) {
    throw std::invalid_argument("plan dimensions do not match the instance");
  }
  std::vector<Violation> out;
  auto add = [&](Constraint c, Location loc, double magnitude, std::string msg) {
    out.push_back({c, loc, magnitude, std::move(msg)});
  };

  const int A = inst.atm_count();
  const int P = inst.periods;
  // visitors[a * P + t] = distinct vehicles visiting ATM a in period t
  std::vector<std::vector<VehicleIndex>> visitors(static_cast<std::size_t>(A * P));

  for (VehicleIndex h = 0; h < inst.vehicle_count(); ++h) {
    const auto& vehicle = inst.vehicles[static_cast<std::size_t>(h)];
    const NodeIndex home = vehicle.home_depot;
    for (Period t = 0; t < P; ++t) {
      const Route& r = plan.route(h, t);
      for (NodeIndex n : r.nodes) {
        if (!inst.valid_node(n)) {
          throw std::invalid_argument("route references unknown node " + std::to_string(n));
        }
      }
      const bool nonempty = !r.nodes.empty();
      if (r.used != nonempty) {
        add(Constraint::indicator, vehicle_at(h, t), 1.0,
            r.used ? "vehicle marked used with an empty route" : "route present but vehicle marked unused");
      }
      if (!nonempty) {
        if (!r.arrival.empty() || !r.service_start.empty()) {
          throw std::invalid_argument("timing given for an empty route");
        }
        continue;
      }

      // Depot flow: leave from and return to the home depot, once.
      int flow_defects = 0;
      if (r.nodes.front() != home) {
        ++flow_defects;
      }
      if (r.nodes.size() < 2 || r.nodes.back() != home) {
        ++flow_defects;
      }
      int atm_positions = 0;
      for (std::size_t k = 0; k < r.nodes.size(); ++k) {
        if (inst.is_atm(r.nodes[k])) {
          ++atm_positions;
        } else if (k != 0 && k + 1 != r.nodes.size()) {
          ++flow_defects; // interior depot
        }
      }
      if (atm_positions == 0) {
        ++flow_defects;
      }
      if (flow_defects > 0) {
        add(Constraint::depot_flow, vehicle_at(h, t), flow_defects,
            "route does not leave from and return to depot " + inst.node_id(home));
      }

      const int repeats = repeated_visits(inst, r.nodes);
      if (repeats > 0) {
        add(Constraint::subtour, vehicle_at(h, t), repeats, "route revisits an ATM (sub-tour)");
      }

      if (static_cast<int>(r.arrival.size()) != atm_positions ||
          static_cast<int>(r.service_start.size()) != atm_positions) {
        throw std::invalid_argument("timing entries do not match the ATM visits of vehicle " +
                                    vehicle.id + " period " + std::to_string(t + 1));
      }

      // Distinct ATMs served on this route.
      std::vector<AtmIndex> served;
      for (NodeIndex n : r.nodes) {
        if (inst.is_atm(n) && std::find(served.begin(), served.end(), inst.atm_of(n)) == served.end()) {
          served.push_back(inst.atm_of(n));
        }
      }
      Money load = 0;
      for (AtmIndex a : served) {
        load += plan.deposit(a, t);
        auto& vs = visitors[static_cast<std::size_t>(a * P + t)];
        if (std::find(vs.begin(), vs.end(), h) == vs.end()) {
          vs.push_back(h);
        }
        const auto& ys = plan.depots_for(a, t);
        if (std::find(ys.begin(), ys.end(), home) == ys.end()) {
          add(Constraint::route_assignment, atm_at(a, t), 1.0,
              "ATM served from depot " + inst.node_id(home) + " without that depot recorded");
        }
      }
      if (load > vehicle.capacity) {
        add(Constraint::capacity, vehicle_at(h, t), static_cast<double>(load - vehicle.capacity),
            "load exceeds vehicle capacity");
      }

      if (r.departure < inst.depot_window.open) {
        add(Constraint::depot_departure, vehicle_at(h, t),
            static_cast<double>(inst.depot_window.open - r.departure), "departs before the depot opens");
      }

      // Walk the route with the stored service starts.
      Minutes ready = r.departure;
      Minutes travel = 0;
      int pos = 0;
      for (std::size_t k = 1; k < r.nodes.size(); ++k) {
        const NodeIndex n = r.nodes[k];
        const Minutes leg = inst.travel(h, r.nodes[k - 1], n);
        travel += leg;
        const Minutes expected = ready + leg;
        if (!inst.is_atm(n)) {
          ready = expected;
          continue;
        }
        const AtmIndex a = inst.atm_of(n);
        const auto& atm = inst.atms[static_cast<std::size_t>(a)];
        const Minutes arrival = r.arrival[static_cast<std::size_t>(pos)];
        const Minutes start = r.service_start[static_cast<std::size_t>(pos)];
        ++pos;
        if (arrival != expected) {
          add(Constraint::timing, atm_at(a, t), std::abs(arrival - expected),
              "arrival differs from predecessor service end plus travel");
        }
        if (arrival < 0 || start < arrival) {
          add(Constraint::service_after_arrival, atm_at(a, t),
              static_cast<double>(std::max(arrival - start, -arrival)), "service starts before arrival");
        }
        if (start < atm.service_window.open) {
          add(Constraint::service_window, atm_at(a, t),
              static_cast<double>(atm.service_window.open - start), "service starts before the ATM window");
        } else if (start > atm.service_window.close) {
          add(Constraint::service_window, atm_at(a, t),
              static_cast<double>(start - atm.service_window.close), "service starts after the ATM window");
        }
        ready = start + atm.service_time;
      }
      if (ready > inst.depot_window.close) {
        add(Constraint::depot_return, vehicle_at(h, t),
            static_cast<double>(ready - inst.depot_window.close), "returns after the depot closes");
      }
      if (travel > inst.max_route_time) {
        add(Constraint::route_time, vehicle_at(h, t), static_cast<double>(travel - inst.max_route_time),
            "travel time exceeds t_max");
      }
    }

    if (inst.max_total_distance) {
      Meters total = 0;
      for (Period t = 0; t < P; ++t) {
        total += route_distance(inst, plan.route(h, t).nodes);
      }
      if (total > *inst.max_total_distance) {
        add(Constraint::horizon_distance, vehicle_at(h, std::nullopt),
            meters_to_km(total - *inst.max_total_distance), "horizon distance exceeds C");
      }
    }
  }

  for (AtmIndex a = 0; a < A; ++a) {
    for (Period t = 0; t < P; ++t) {
      const auto& vs = visitors[static_cast<std::size_t>(a * P + t)];
      if (vs.size() > 1) {
        add(Constraint::single_vehicle, atm_at(a, t), static_cast<double>(vs.size() - 1),
            "ATM visited by more than one vehicle");
      } else if (vs.empty() && plan.deposit(a, t) > 0) {
        add(Constraint::single_vehicle, atm_at(a, t), 1.0, "deposit without a visit");
      }
      const auto& ys = plan.depots_for(a, t);
      for (DepotIndex d : ys) {
        if (!inst.is_depot(d)) {
          throw std::invalid_argument("assignment references a non-depot node");
        }
      }
      if (ys.size() > 1) {
        add(Constraint::single_depot, atm_at(a, t), static_cast<double>(ys.size() - 1),
            "ATM assigned to more than one depot");
      }
      if (plan.deposit(a, t) < 0) {
        add(Constraint::nonnegative_deposit, atm_at(a, t), static_cast<double>(-plan.deposit(a, t)),
            "negative deposit");
      }
    }
  }

  const auto traj = inventory_trajectory(inst, plan);
  for (AtmIndex a = 0; a < A; ++a) {
    const auto& row = traj.balances[static_cast<std::size_t>(a)];
    std::optional<Period> first;
    Money worst = 0;
    for (Period t = 0; t < P; ++t) {
      if (row[static_cast<std::size_t>(t)] < 0) {
        if (!first) {
          first = t;
        }
        worst = std::max(worst, -row[static_cast<std::size_t>(t)]);
      }
    }
    if (first) {
      add(Constraint::inventory, atm_at(a, *first), static_cast<double>(worst),
          "withdrawals exceed available cash");
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Violation& x, const Violation& y) {
    return static_cast<int>(x.constraint) < static_cast<int>(y.constraint);
  });
  return out;
}

std::string format_violation(const Instance& inst, const Violation& v) {
  std::string loc;
  switch (v.location.kind) {
  case Location::Kind::atm:
    loc = "atm=" + inst.atms[static_cast<std::size_t>(v.location.index)].id;
    break;
  case Location::Kind::vehicle:
    loc = "vehicle=" + inst.vehicles[static_cast<std::size_t>(v.location.index)].id;
    break;
  case Location::Kind::depot:
    loc = "depot=" + inst.depots[static_cast<std::size_t>(v.location.index)].id;
    break;
  }
  if (v.location.period) {
    loc += ",period=" + std::to_string(*v.location.period + 1);
  }
  char mag[64];
  if (v.magnitude == std::floor(v.magnitude) && std::fabs(v.magnitude) < 1e15) {
    std::snprintf(mag, sizeof mag, "%.0f", v.magnitude);
  } else {
    std::snprintf(mag, sizeof mag, "%.3f", v.magnitude);
  }
  return constraint_code(v.constraint) + " " + loc + " excess=" + mag + " — " + v.message;
}

} // namespace atmroute
