#pragma once

#include <vector>

#include "atmroute/instance.hpp"
#include "atmroute/plan.hpp"

namespace atmroute {

// End-of-period cash balance per ATM: balances[j][t] = I_0j + sum_{k<=t}(d_jk - m_jk).
struct InventoryTrajectory {
  std::vector<std::vector<Money>> balances;

  Money total() const;
};

InventoryTrajectory inventory_trajectory(const Instance& inst, const Plan& plan);

// Interest on `balance_days` VND-days at the instance rate, IR/365 applied last
// and rounded half-up to 1 VND.
Money interest_on(std::int64_t rate_ppm, Money balance_days);

// f1 over all routes. Throws std::out_of_range on unknown node indices.
Money transport_cost(const Instance& inst, const Plan& plan);
Money route_transport_cost(const Instance& inst, VehicleIndex h, const std::vector<NodeIndex>& nodes);
Meters route_distance(const Instance& inst, const std::vector<NodeIndex>& nodes);

// The weighted coefficient sum inside f2: sum_j [p(I_0j + d_j1 - m_j1) +
// (p-1)(d_j2 - m_j2) + ... + (d_jp - m_jp)]. Equal to the balance total.
Money financial_coefficient_sum(const Instance& inst, const Plan& plan);

// f2 = IR/365 * financial_coefficient_sum, rounded half-up.
Money financial_cost(const Instance& inst, const Plan& plan);

struct Weights {
  double transport = 1.0;
  double financial = 1.0;

  bool operator==(const Weights&) const = default;
};

struct CostBreakdown {
  Money transport = 0;
  Money financial = 0;
  double aggregate = 0.0;
  int trips = 0;
  Meters total_distance = 0;

  double total_km() const {
    return meters_to_km(total_distance);
  }
  bool operator==(const CostBreakdown&) const = default;
};

// Throws std::invalid_argument when both weights are zero or one is negative.
CostBreakdown aggregate_cost(const Instance& inst, const Plan& plan, Weights weights);

} // namespace atmroute
