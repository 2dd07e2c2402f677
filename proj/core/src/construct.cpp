#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "atmroute/solver.hpp"
#include "rng.hpp"
#include "search_state.hpp"

namespace atmroute {

std::vector<DepotIndex> assign_depots(const Instance& inst) {
  // Depots without vehicles cannot serve anyone; skip them unless no depot
  // has a vehicle at all.
  std::vector<bool> staffed(inst.depots.size(), inst.vehicles.empty());
  for (const auto& v : inst.vehicles) {
    staffed[static_cast<std::size_t>(v.home_depot)] = true;
  }
  std::vector<DepotIndex> out(inst.atms.size(), 0);
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    const auto n = static_cast<std::size_t>(inst.atm_node(a));
    Meters best = std::numeric_limits<Meters>::max();
    for (DepotIndex d = 0; d < inst.depot_count(); ++d) {
      const Meters c = inst.distance(static_cast<std::size_t>(d), n);
      if (staffed[static_cast<std::size_t>(d)] && c < best) {
        best = c;
        out[static_cast<std::size_t>(a)] = d;
      }
    }
  }
  return out;
}

namespace detail {

namespace {

struct Candidate {
  VehicleIndex h = -1;
  std::vector<AtmIndex> seq;
  Money delta = 0;
};

// Cheapest insertion of ATM a into a route of its depot at period t that
// keeps the route and the vehicle's horizon distance within limits.
std::optional<Candidate> feasible_insertion(const SearchState& st, AtmIndex a, Period t,
                                            const std::pair<AtmIndex, std::vector<Money>>* ov) {
  const Instance& inst = st.instance();
  std::optional<Candidate> best;
  for (VehicleIndex h : st.fleet(st.depot_of(a))) {
    const auto& s = st.seq(h, t);
    const RouteEval& old = st.route_eval(st.slot(h, t));
    for (std::size_t pos = 0; pos <= s.size(); ++pos) {
      std::vector<AtmIndex> cand = s;
      cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(pos), a);
      const RouteEval ev = st.evaluate(h, t, cand, ov);
      if (ev.violation > 0) {
        continue;
      }
      if (inst.max_total_distance &&
          st.vehicle_meters(h) - old.meters + ev.meters > *inst.max_total_distance) {
        continue;
      }
      const Money delta = ev.cost - old.cost;
      if (!best || delta < best->delta) {
        best = Candidate{h, std::move(cand), delta};
      }
    }
  }
  return best;
}

void repair(SearchState& st, AtmIndex a, Period t) {
  const int p = st.periods();
  const Money amount = st.deposit(a, t);
  const auto current = st.deposits(a);
  auto moved_to = [&](Period to) {
    auto d = current;
    d[static_cast<std::size_t>(to)] += amount;
    d[static_cast<std::size_t>(t)] = 0;
    return std::pair<AtmIndex, std::vector<Money>>{a, std::move(d)};
  };

  for (Period to = t - 1; to >= 0; --to) {
    auto ov = moved_to(to);
    const VehicleIndex h = st.server(a, to);
    if (h >= 0) {
      const auto& s = st.seq(h, to);
      if (st.evaluate(h, to, s, &ov).violation == 0) {
        st.apply({{{st.slot(h, to), s}}, std::move(ov)});
        return;
      }
    } else if (auto c = feasible_insertion(st, a, to, &ov)) {
      st.apply({{{st.slot(c->h, to), std::move(c->seq)}}, std::move(ov)});
      return;
    }
  }
  // Later periods are not routed yet; the amount joins their pending set.
  for (Period to = t + 1; to < p; ++to) {
    auto ov = moved_to(to);
    if (st.inventory_units(a, ov.second) <= st.inventory_units(a, current)) {
      st.apply({{}, std::move(ov)});
      return;
    }
  }
  auto dropped = current;
  dropped[static_cast<std::size_t>(t)] = 0;
  st.apply({{}, std::pair<AtmIndex, std::vector<Money>>{a, std::move(dropped)}});
}

} // namespace

SearchState initial_state(const Instance& inst, const SplitSchedule& schedule, Weights weights) {
  if (schedule.periods != inst.periods || schedule.atms.size() != inst.atms.size()) {
    throw std::invalid_argument("schedule does not match the instance");
  }
  SearchState st(inst, assign_depots(inst), weights);
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    for (Period t = 0; t < inst.periods; ++t) {
      st.set_deposit(a, t, schedule.deposit(a, t));
    }
  }
  st.refresh();
  return st;
}

} // namespace detail

Plan construct_plan(const Instance& inst, const SplitSchedule& schedule, std::uint64_t seed) {
  detail::SearchState st = detail::initial_state(inst, schedule, Weights{});
  detail::Rng rng(seed);
  std::vector<std::uint64_t> key(inst.atms.size());
  for (auto& k : key) {
    k = rng.next();
  }

  for (Period t = 0; t < inst.periods; ++t) {
    std::vector<AtmIndex> pending;
    for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
      if (st.deposit(a, t) > 0) {
        pending.push_back(a);
      }
    }
    while (!pending.empty()) {
      std::size_t best_i = pending.size();
      std::optional<detail::Candidate> best;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        auto c = detail::feasible_insertion(st, pending[i], t, nullptr);
        if (!c) {
          continue;
        }
        if (!best || std::tie(c->delta, key[static_cast<std::size_t>(pending[i])]) <
                       std::tie(best->delta, key[static_cast<std::size_t>(pending[best_i])])) {
          best = std::move(c);
          best_i = i;
        }
      }
      if (!best) {
        break;
      }
      st.apply({{{st.slot(best->h, t), std::move(best->seq)}}, std::nullopt});
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best_i));
    }
    std::sort(pending.begin(), pending.end(),
              [&](AtmIndex x, AtmIndex y) { return key[static_cast<std::size_t>(x)] < key[static_cast<std::size_t>(y)]; });
    for (AtmIndex a : pending) {
      detail::repair(st, a, t);
    }
  }
  return st.to_plan();
}

} // namespace atmroute
