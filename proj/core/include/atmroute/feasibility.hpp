#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atmroute/instance.hpp"
#include "atmroute/plan.hpp"

namespace atmroute {

// Constraint families C3 to C18.
enum class Constraint {
  single_vehicle = 3,       // one vehicle per ATM per period; deposits need a visit
  capacity = 4,             // route load within q_h
  depot_flow = 5,           // route leaves from and returns to the home depot
  service_after_arrival = 6,// 0 <= r <= w
  service_window = 7,       // e_j <= w <= l_j
  subtour = 8,              // no ATM-only cycles inside a route
  route_time = 9,           // travel minutes per period within t_max
  route_assignment = 10,    // serving depot recorded for every visit
  single_depot = 11,        // at most one depot per ATM per period
  horizon_distance = 12,    // km per vehicle over the horizon within C
  timing = 13,              // arrivals follow the predecessor's service end
  inventory = 14,           // withdrawals covered by the running balance
  depot_departure = 15,     // departure no earlier than e_0
  depot_return = 16,        // back at the depot no later than l_0
  indicator = 17,           // vehicle-use flag agrees with the route
  nonnegative_deposit = 18, // d_jt >= 0
};

inline constexpr std::array<Constraint, 16> all_constraints{
  Constraint::single_vehicle,   Constraint::capacity,
  Constraint::depot_flow,       Constraint::service_after_arrival,
  Constraint::service_window,   Constraint::subtour,
  Constraint::route_time,       Constraint::route_assignment,
  Constraint::single_depot,     Constraint::horizon_distance,
  Constraint::timing,           Constraint::inventory,
  Constraint::depot_departure,  Constraint::depot_return,
  Constraint::indicator,        Constraint::nonnegative_deposit,
};

// "C3", "C4", ...
std::string constraint_code(Constraint c);

struct Location {
  enum class Kind { atm, vehicle, depot };
  Kind kind = Kind::atm;
  int index = 0;                // ATM, vehicle or depot index
  std::optional<Period> period; // empty for horizon-wide constraints

  bool operator==(const Location&) const = default;
};

struct Violation {
  Constraint constraint;
  Location location;
  double magnitude = 0.0; // > 0, in the constraint's own unit (VND, minutes, km, count)
  std::string message;
};

struct VisitTime {
  NodeIndex node;
  Minutes arrival;
  Minutes service_start;
};

struct Timeline {
  std::vector<VisitTime> visits; // one per ATM position
  Minutes return_time = 0;
  Minutes travel_time = 0;
};

// Forward time recurrence along a route: arrival = previous service end +
// travel, service start = max(arrival, e_j). Throws std::invalid_argument when
// the route does not start and end at the vehicle's home depot.
Timeline propagate_times(const Instance& inst, const std::vector<NodeIndex>& route,
                         VehicleIndex h, Minutes departure);

// Every breach in the plan, grouped by family. Throws std::invalid_argument
// for unknown ids or timing vectors that do not match the route shape.
std::vector<Violation> check_plan(const Instance& inst, const Plan& plan);

// Explicit subtour test over every ATM subset S (|S| >= 1, self loops
// counted) of the route's arc multiset. Exponential; meant for V <= 10.
bool violates_subtour_subsets(const Instance& inst, const std::vector<NodeIndex>& route);

// Encoding-based subtour test used by check_plan: an ATM repeated within a
// run of consecutive ATM visits.
int repeated_visits(const Instance& inst, const std::vector<NodeIndex>& route);

// "<family> <location> excess=<magnitude> — <message>", the validate output line.
std::string format_violation(const Instance& inst, const Violation& v);

} // namespace atmroute
