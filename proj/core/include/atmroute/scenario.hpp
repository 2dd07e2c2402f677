#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atmroute/instance.hpp"

namespace atmroute {

enum class WithdrawalProfile { uniform, frontloaded, weekend_spike };

struct MoneyRange {
  Money low = 0;
  Money high = 0;

  bool operator==(const MoneyRange&) const = default;
};

// Synthetic instance parameters. Defaults describe the 28-ATM, two-depot,
// seven-day desk experiment.
struct ScenarioParams {
  int n_atms = 28;
  int n_depots = 2;
  int vehicles_per_depot = 2;
  int periods = 7;
  MoneyRange total_demand_range{2'500'000'000, 3'500'000'000};
  MoneyRange per_deposit_range{1'000'000'000, 1'400'000'000};
  double interest_rate = 0.05;
  double area_extent_km = 30.0;
  WithdrawalProfile withdrawal_profile = WithdrawalProfile::uniform;
  std::uint64_t seed = 1;

  // Fleet and operations.
  Money vehicle_capacity = 40'000'000'000;
  Money cost_per_km = 25'000;
  double speed_kmh = 30.0;
  TimeWindow depot_window{450, 1050};
  Minutes max_route_time = 360;
  std::optional<double> max_total_distance_km;
  Minutes service_time_min = 10;
  Minutes service_time_max = 20;
  Money demand_granularity = 1'000'000;

  bool operator==(const ScenarioParams&) const = default;
};

// Throws std::invalid_argument naming the offending field.
void validate_params(const ScenarioParams& params);

// Fields missing from the document keep their defaults.
ScenarioParams parse_scenario_params(std::string_view text);
std::string serialize_scenario_params(const ScenarioParams& params);

// Depots and ATMs uniform in the square, Euclidean distances rounded to
// 0.1 km, withdrawals spread per profile so they sum to each ATM's total
// demand, initial balance equal to the first day's withdrawals.
Instance generate_scenario(const ScenarioParams& params);

// Parses a comma-delimited V x V table whose header row lists node ids. Rows
// may carry a leading id column. Header order may be any permutation of
// `node_order`; the result follows `node_order`. The diagonal is forced to
// zero. Throws InputError naming the cell on bad dimensions, negative or
// non-finite entries.
Matrix<Meters> ingest_distance_matrix(std::string_view csv,
                                      const std::vector<std::string>& node_order);

// Node ids of the instance in dense order.
std::vector<std::string> node_order(const Instance& inst);

// Replaces distances and re-derives travel times unless they are explicit.
void apply_distance_matrix(Instance& inst, Matrix<Meters> distance);

std::string profile_name(WithdrawalProfile p);

} // namespace atmroute
