#include "search_state.hpp"

namespace atmroute::detail {

Weights effective_weights(Weights w) {
  constexpr double floor = 1e-9;
  return {std::max(w.transport, floor), std::max(w.financial, floor)};
}

Money max_arc_cost(const Instance& inst) {
  Money best = 1;
  for (VehicleIndex h = 0; h < inst.vehicle_count(); ++h) {
    for (NodeIndex i = 0; i < inst.node_count(); ++i) {
      for (NodeIndex j = 0; j < inst.node_count(); ++j) {
        best = std::max(best, inst.arc_cost(h, i, j));
      }
    }
  }
  return best;
}

SearchState::SearchState(const Instance& inst, std::vector<DepotIndex> depot_of, Weights weights)
  : inst_(&inst), depot_of_(std::move(depot_of)) {
  const Weights w = effective_weights(weights);
  w_transport_ = w.transport;
  w_financial_ = w.financial;
  fleet_.resize(inst.depots.size());
  for (VehicleIndex h = 0; h < inst.vehicle_count(); ++h) {
    fleet_[static_cast<std::size_t>(inst.vehicles[static_cast<std::size_t>(h)].home_depot)].push_back(h);
  }
  const auto slots = static_cast<std::size_t>(inst.vehicle_count() * inst.periods);
  const auto cells = static_cast<std::size_t>(inst.atm_count() * inst.periods);
  seqs_.resize(slots);
  evals_.resize(slots);
  deposits_.assign(cells, 0);
  server_.assign(cells, -1);
  meters_.assign(inst.vehicles.size(), 0);
  inventory_.assign(inst.atms.size(), 0);
}

std::vector<Money> SearchState::deposits(AtmIndex a) const {
  const auto p = static_cast<std::size_t>(inst_->periods);
  const auto first = deposits_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(a) * p);
  return {first, first + static_cast<std::ptrdiff_t>(p)};
}

std::int64_t SearchState::horizon_excess(Meters meters) const {
  if (!inst_->max_total_distance || meters <= *inst_->max_total_distance) {
    return 0;
  }
  return ceil_div(meters - *inst_->max_total_distance, 1000);
}

std::int64_t SearchState::inventory_units(AtmIndex a, const std::vector<Money>& deposits) const {
  const auto& atm = inst_->atms[static_cast<std::size_t>(a)];
  Money balance = atm.initial_balance;
  Money deficit = 0;
  for (Period t = 0; t < inst_->periods; ++t) {
    balance += deposits[static_cast<std::size_t>(t)] - atm.forecast_withdrawals[static_cast<std::size_t>(t)];
    deficit = std::max(deficit, -balance);
  }
  return ceil_div(deficit, 1'000'000);
}

RouteEval SearchState::evaluate(VehicleIndex h, Period t, const std::vector<AtmIndex>& s,
                                const std::pair<AtmIndex, std::vector<Money>>* ov) const {
  return evaluate_route(*inst_, h, s, [&](AtmIndex a) {
    if (ov != nullptr && ov->first == a) {
      return ov->second[static_cast<std::size_t>(t)];
    }
    return deposit(a, t);
  });
}

void SearchState::refresh() {
  const int p = inst_->periods;
  std::fill(server_.begin(), server_.end(), -1);
  std::fill(meters_.begin(), meters_.end(), 0);
  transport_ = 0;
  route_violation_ = 0;
  for (VehicleIndex h = 0; h < inst_->vehicle_count(); ++h) {
    for (Period t = 0; t < p; ++t) {
      const auto& s = seq(h, t);
      for (AtmIndex a : s) {
        server_[static_cast<std::size_t>(a * p + t)] = h;
      }
      const RouteEval ev = evaluate(h, t, s);
      evals_[static_cast<std::size_t>(slot(h, t))] = ev;
      transport_ += ev.cost;
      route_violation_ += ev.violation;
      meters_[static_cast<std::size_t>(h)] += ev.meters;
    }
  }
  horizon_violation_ = 0;
  for (Meters m : meters_) {
    horizon_violation_ += horizon_excess(m);
  }
  inventory_violation_ = 0;
  coefficient_ = 0;
  for (AtmIndex a = 0; a < inst_->atm_count(); ++a) {
    const auto& atm = inst_->atms[static_cast<std::size_t>(a)];
    inventory_[static_cast<std::size_t>(a)] = inventory_units(a, deposits(a));
    inventory_violation_ += inventory_[static_cast<std::size_t>(a)];
    coefficient_ += static_cast<Money>(p) * atm.initial_balance;
    for (Period t = 0; t < p; ++t) {
      coefficient_ += static_cast<Money>(p - t) * (deposit(a, t) - atm.forecast_withdrawals[static_cast<std::size_t>(t)]);
    }
  }
}

double SearchState::base_objective() const {
  return w_transport_ * static_cast<double>(transport_) +
         w_financial_ * static_cast<double>(interest_on(inst_->interest_rate_ppm, coefficient_));
}

double SearchState::objective_after(const Change& c, double penalty) const {
  const int p = inst_->periods;
  Money transport = transport_;
  std::int64_t route_violation = route_violation_;
  std::vector<std::pair<VehicleIndex, Meters>> meter_delta;
  const auto* ov = c.deposits ? &*c.deposits : nullptr;
  for (const auto& [s, nodes] : c.routes) {
    const VehicleIndex h = vehicle_of_slot(s);
    const RouteEval& old = evals_[static_cast<std::size_t>(s)];
    const RouteEval ev = evaluate(h, period_of_slot(s), nodes, ov);
    transport += ev.cost - old.cost;
    route_violation += ev.violation - old.violation;
    auto it = std::find_if(meter_delta.begin(), meter_delta.end(),
                           [h = h](const auto& e) { return e.first == h; });
    if (it == meter_delta.end()) {
      meter_delta.emplace_back(h, ev.meters - old.meters);
    } else {
      it->second += ev.meters - old.meters;
    }
  }
  std::int64_t horizon = horizon_violation_;
  for (const auto& [h, delta] : meter_delta) {
    const Meters m = meters_[static_cast<std::size_t>(h)];
    horizon += horizon_excess(m + delta) - horizon_excess(m);
  }
  std::int64_t inventory = inventory_violation_;
  Money coefficient = coefficient_;
  if (ov != nullptr) {
    const AtmIndex a = ov->first;
    inventory += inventory_units(a, ov->second) - inventory_[static_cast<std::size_t>(a)];
    for (Period t = 0; t < p; ++t) {
      coefficient += static_cast<Money>(p - t) * (ov->second[static_cast<std::size_t>(t)] - deposit(a, t));
    }
  }
  const double base = w_transport_ * static_cast<double>(transport) +
                      w_financial_ * static_cast<double>(interest_on(inst_->interest_rate_ppm, coefficient));
  return base + penalty * static_cast<double>(route_violation + horizon + inventory);
}

void SearchState::apply(const Change& c) {
  const int p = inst_->periods;
  if (c.deposits) {
    const AtmIndex a = c.deposits->first;
    for (Period t = 0; t < p; ++t) {
      const Money d = c.deposits->second[static_cast<std::size_t>(t)];
      coefficient_ += static_cast<Money>(p - t) * (d - deposit(a, t));
      set_deposit(a, t, d);
    }
    const std::int64_t units = inventory_units(a, c.deposits->second);
    inventory_violation_ += units - inventory_[static_cast<std::size_t>(a)];
    inventory_[static_cast<std::size_t>(a)] = units;
  }
  for (const auto& [s, nodes] : c.routes) {
    const Period t = period_of_slot(s);
    for (AtmIndex a : seqs_[static_cast<std::size_t>(s)]) {
      server_[static_cast<std::size_t>(a * p + t)] = -1;
    }
  }
  for (const auto& [s, nodes] : c.routes) {
    const VehicleIndex h = vehicle_of_slot(s);
    const Period t = period_of_slot(s);
    const RouteEval ev = evaluate(h, t, nodes);
    RouteEval& old = evals_[static_cast<std::size_t>(s)];
    transport_ += ev.cost - old.cost;
    route_violation_ += ev.violation - old.violation;
    Meters& m = meters_[static_cast<std::size_t>(h)];
    horizon_violation_ -= horizon_excess(m);
    m += ev.meters - old.meters;
    horizon_violation_ += horizon_excess(m);
    old = ev;
    seqs_[static_cast<std::size_t>(s)] = nodes;
    for (AtmIndex a : nodes) {
      server_[static_cast<std::size_t>(a * p + t)] = h;
    }
  }
}

Plan SearchState::to_plan() const {
  Plan plan(*inst_);
  for (VehicleIndex h = 0; h < inst_->vehicle_count(); ++h) {
    for (Period t = 0; t < inst_->periods; ++t) {
      Route& r = plan.route(h, t);
      r.nodes = closed_route(*inst_, h, seq(h, t));
      r.departure = r.nodes.empty() ? 0 : inst_->depot_window.open;
    }
  }
  for (AtmIndex a = 0; a < inst_->atm_count(); ++a) {
    for (Period t = 0; t < inst_->periods; ++t) {
      plan.deposit(a, t) = deposit(a, t);
    }
  }
  derive_plan_bookkeeping(*inst_, plan);
  return plan;
}

} // namespace atmroute::detail
