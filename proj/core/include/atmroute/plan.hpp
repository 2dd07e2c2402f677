#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atmroute/instance.hpp"

namespace atmroute {

// One vehicle in one period. `nodes` is the full sequence including both
// depot endpoints, or empty when the vehicle stays home. Timing entries are
// kept per ATM position in `nodes`, in route order.
struct Route {
  std::vector<NodeIndex> nodes;
  Minutes departure = 0;              // u_ht
  std::vector<Minutes> arrival;       // r_jht
  std::vector<Minutes> service_start; // w_jht
  bool used = false;                  // z_ht

  bool empty() const noexcept {
    return nodes.empty();
  }
  bool operator==(const Route&) const = default;
};

struct Arc {
  NodeIndex from;
  NodeIndex to;

  bool operator==(const Arc&) const = default;
};

// Multi-period solution. A value type: copy it, never share it mutably.
class Plan {
public:
  Plan() = default;
  Plan(int vehicles, int atms, int periods);
  explicit Plan(const Instance& inst)
    : Plan(inst.vehicle_count(), inst.atm_count(), inst.periods) {
  }

  int vehicle_count() const noexcept {
    return vehicles_;
  }
  int atm_count() const noexcept {
    return atms_;
  }
  int periods() const noexcept {
    return periods_;
  }

  Route& route(VehicleIndex h, Period t) {
    return routes_[static_cast<std::size_t>(h * periods_ + t)];
  }
  const Route& route(VehicleIndex h, Period t) const {
    return routes_[static_cast<std::size_t>(h * periods_ + t)];
  }

  Money& deposit(AtmIndex a, Period t) {
    return deposits_[static_cast<std::size_t>(a * periods_ + t)];
  }
  Money deposit(AtmIndex a, Period t) const {
    return deposits_[static_cast<std::size_t>(a * periods_ + t)];
  }

  // y_ijt as the list of depots recorded for (ATM, period). More than one
  // entry is representable so that breaches of the single-depot rule can be
  // expressed and reported.
  std::vector<DepotIndex>& depots_for(AtmIndex a, Period t) {
    return assignment_[static_cast<std::size_t>(a * periods_ + t)];
  }
  const std::vector<DepotIndex>& depots_for(AtmIndex a, Period t) const {
    return assignment_[static_cast<std::size_t>(a * periods_ + t)];
  }

  int trip_count() const;

  bool operator==(const Plan&) const = default;

private:
  int vehicles_ = 0;
  int atms_ = 0;
  int periods_ = 0;
  std::vector<Route> routes_;
  std::vector<Money> deposits_;
  std::vector<std::vector<DepotIndex>> assignment_;
};

// x_ijht for one route, in traversal order.
std::vector<Arc> route_arcs(const std::vector<NodeIndex>& nodes);

// Rebuilds the node sequence from an arc set by walking from `start`.
// Returns an empty sequence when the arcs do not form a single walk.
std::vector<NodeIndex> sequence_from_arcs(const std::vector<Arc>& arcs, NodeIndex start);

// Route for vehicle h visiting the ATMs in order, with depot endpoints.
std::vector<NodeIndex> closed_route(const Instance& inst, VehicleIndex h,
                                    const std::vector<AtmIndex>& atms);

// Plan file I/O. Timing, usage flags and depot assignment may be omitted in
// the document; they are then derived from the routes (departure at the depot
// opening time, earliest service starts).
Plan parse_plan(const Instance& inst, std::string_view text);
std::string serialize_plan(const Instance& inst, const Plan& plan);

// Sets used flags, depot assignment and timing from the routes alone, using
// each route's current departure time.
void derive_plan_bookkeeping(const Instance& inst, Plan& plan);

} // namespace atmroute
