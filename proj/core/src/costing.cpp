#include "atmroute/costing.hpp"

#include <stdexcept>

namespace atmroute {

Money InventoryTrajectory::total() const {
  Money sum = 0;
  for (const auto& row : balances) {
    for (Money b : row) {
      sum += b;
    }
  }
  return sum;
}

InventoryTrajectory inventory_trajectory(const Instance& inst, const Plan& plan) {
  InventoryTrajectory traj;
  traj.balances.resize(inst.atms.size());
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    const auto& atm = inst.atms[static_cast<std::size_t>(a)];
    auto& row = traj.balances[static_cast<std::size_t>(a)];
    row.reserve(static_cast<std::size_t>(inst.periods));
    Money balance = atm.initial_balance;
    for (Period t = 0; t < inst.periods; ++t) {
      balance += plan.deposit(a, t) - atm.forecast_withdrawals[static_cast<std::size_t>(t)];
      row.push_back(balance);
    }
  }
  return traj;
}

namespace {
__extension__ typedef __int128 wide;
} // namespace

Money interest_on(std::int64_t rate_ppm, Money balance_days) {
  // round_half_up(balance_days * ppm / (365 * 1e6)), exact in 128-bit.
  const wide num = static_cast<wide>(balance_days) * rate_ppm;
  const wide den = static_cast<wide>(365) * 1'000'000;
  const wide twice = 2 * num + den;
  const wide denom2 = 2 * den;
  wide q = twice / denom2;
  if ((twice % denom2 != 0) && (twice < 0)) {
    --q; // floor for negative numerators
  }
  return static_cast<Money>(q);
}

Meters route_distance(const Instance& inst, const std::vector<NodeIndex>& nodes) {
  Meters total = 0;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (!inst.valid_node(nodes[k - 1]) || !inst.valid_node(nodes[k])) {
      throw std::out_of_range("route references unknown node");
    }
    total += inst.distance(static_cast<std::size_t>(nodes[k - 1]), static_cast<std::size_t>(nodes[k]));
  }
  return total;
}

Money route_transport_cost(const Instance& inst, VehicleIndex h, const std::vector<NodeIndex>& nodes) {
  if (nodes.empty()) {
    return 0;
  }
  Money cost = inst.vehicles[static_cast<std::size_t>(h)].fixed_cost_per_trip;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (!inst.valid_node(nodes[k - 1]) || !inst.valid_node(nodes[k])) {
      throw std::out_of_range("route references unknown node");
    }
    cost += inst.arc_cost(h, nodes[k - 1], nodes[k]);
  }
  return cost;
}

Money transport_cost(const Instance& inst, const Plan& plan) {
  Money total = 0;
  for (VehicleIndex h = 0; h < plan.vehicle_count(); ++h) {
    for (Period t = 0; t < plan.periods(); ++t) {
      total += route_transport_cost(inst, h, plan.route(h, t).nodes);
    }
  }
  return total;
}

Money financial_coefficient_sum(const Instance& inst, const Plan& plan) {
  const Money p = inst.periods;
  Money sum = 0;
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    const auto& atm = inst.atms[static_cast<std::size_t>(a)];
    sum += p * atm.initial_balance;
    for (Period t = 0; t < inst.periods; ++t) {
      // Period t (0-based) carries weight p - t.
      sum += (p - t) * (plan.deposit(a, t) - atm.forecast_withdrawals[static_cast<std::size_t>(t)]);
    }
  }
  return sum;
}

Money financial_cost(const Instance& inst, const Plan& plan) {
  return interest_on(inst.interest_rate_ppm, financial_coefficient_sum(inst, plan));
}

CostBreakdown aggregate_cost(const Instance& inst, const Plan& plan, Weights weights) {
  if (weights.transport < 0 || weights.financial < 0) {
    throw std::invalid_argument("weights must be nonnegative");
  }
  if (weights.transport == 0 && weights.financial == 0) {
    throw std::invalid_argument("weights must not both be zero");
  }
  CostBreakdown cb;
  cb.transport = transport_cost(inst, plan);
  cb.financial = financial_cost(inst, plan);
  cb.aggregate = weights.transport * static_cast<double>(cb.transport) +
                 weights.financial * static_cast<double>(cb.financial);
  cb.trips = plan.trip_count();
  for (VehicleIndex h = 0; h < plan.vehicle_count(); ++h) {
    for (Period t = 0; t < plan.periods(); ++t) {
      cb.total_distance += route_distance(inst, plan.route(h, t).nodes);
    }
  }
  return cb;
}

} // namespace atmroute
