#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atmroute/types.hpp"

namespace atmroute {

struct TimeWindow {
  Minutes open = 0;
  Minutes close = 0;

  bool operator==(const TimeWindow&) const = default;
};

// Planar position in km. Opaque metadata: nothing in the solver reads it.
struct Position {
  double x_km = 0.0;
  double y_km = 0.0;

  bool operator==(const Position&) const = default;
};

struct Depot {
  std::string id; // "01".."0D"
  std::optional<Position> position;

  bool operator==(const Depot&) const = default;
};

struct Atm {
  std::string id; // positive integer string
  Money initial_balance = 0;
  TimeWindow service_window;
  Minutes service_time = 0;
  std::vector<Money> forecast_withdrawals; // one entry per period
  Money total_demand = 0;                  // replenishment to split over the horizon
  std::optional<Position> position;

  bool operator==(const Atm&) const = default;
};

struct Vehicle {
  std::string id;
  DepotIndex home_depot = 0;
  Money capacity = 0;
  Money cost_per_km = 0;
  double speed_kmh = 30.0; // only used when travel times are derived
  // Charged once per non-empty route. Not part of the distance cost model;
  // defaults to zero.
  Money fixed_cost_per_trip = 0;

  bool operator==(const Vehicle&) const = default;
};

struct SplitBounds {
  Money lower = 0;
  Money upper = 0;

  bool operator==(const SplitBounds&) const = default;
};

// Full problem input. Treated as immutable once built; share by const&.
struct Instance {
  std::vector<Depot> depots;
  std::vector<Atm> atms;
  std::vector<Vehicle> vehicles;
  int periods = 1;

  Matrix<Meters> distance;                 // V x V, node order = depots then ATMs
  std::vector<Matrix<Minutes>> travel_time; // one V x V matrix per vehicle
  bool explicit_travel_time = false;       // false: derived from distance and speed

  std::int64_t interest_rate_ppm = 50'000; // annual rate in parts per million
  TimeWindow depot_window{480, 1080};
  Minutes max_route_time = 600;               // travel minutes per vehicle per period
  std::optional<Meters> max_total_distance;   // per vehicle over the horizon; empty = unbounded
  std::optional<SplitBounds> split_bounds;

  int depot_count() const noexcept {
    return static_cast<int>(depots.size());
  }
  int atm_count() const noexcept {
    return static_cast<int>(atms.size());
  }
  int vehicle_count() const noexcept {
    return static_cast<int>(vehicles.size());
  }
  int node_count() const noexcept {
    return depot_count() + atm_count();
  }

  NodeIndex atm_node(AtmIndex a) const noexcept {
    return depot_count() + a;
  }
  AtmIndex atm_of(NodeIndex n) const noexcept {
    return n - depot_count();
  }
  bool is_depot(NodeIndex n) const noexcept {
    return n >= 0 && n < depot_count();
  }
  bool is_atm(NodeIndex n) const noexcept {
    return n >= depot_count() && n < node_count();
  }
  bool valid_node(NodeIndex n) const noexcept {
    return n >= 0 && n < node_count();
  }

  const std::string& node_id(NodeIndex n) const;
  std::optional<NodeIndex> find_node(std::string_view id) const;
  std::optional<VehicleIndex> find_vehicle(std::string_view id) const;

  Minutes service_time(NodeIndex n) const {
    return is_atm(n) ? atms[atm_of(n)].service_time : 0;
  }

  Minutes travel(VehicleIndex h, NodeIndex i, NodeIndex j) const {
    return travel_time[h](i, j);
  }

  // a_h * c_ij rounded half-up to whole VND.
  Money arc_cost(VehicleIndex h, NodeIndex i, NodeIndex j) const;

  bool operator==(const Instance&) const = default;
};

// Fills travel_time from distance and each vehicle's speed (minutes rounded
// half-up). Leaves explicit tensors alone.
void derive_travel_times(Instance& inst);

Minutes travel_minutes(Meters distance, double speed_kmh);

struct Defect {
  std::string path;
  std::string message;
};

// Empty iff every instance-level invariant holds.
std::vector<Defect> validate_instance(const Instance& inst);

// Parses the instance document. Throws InputError with a field path on schema
// violations, dimension mismatches and invariant breaches.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

} // namespace atmroute
