#include "atmroute/plan.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json_util.hpp"
#include "timing.hpp"

namespace atmroute {

using detail::json;
using detail::ordered_json;

Plan::Plan(int vehicles, int atms, int periods)
  : vehicles_(vehicles), atms_(atms), periods_(periods),
    routes_(static_cast<std::size_t>(vehicles * periods)),
    deposits_(static_cast<std::size_t>(atms * periods), 0),
    assignment_(static_cast<std::size_t>(atms * periods)) {
}

int Plan::trip_count() const {
  return static_cast<int>(
    std::count_if(routes_.begin(), routes_.end(), [](const Route& r) { return !r.empty(); }));
}

std::vector<Arc> route_arcs(const std::vector<NodeIndex>& nodes) {
  std::vector<Arc> arcs;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    arcs.push_back({nodes[k - 1], nodes[k]});
  }
  return arcs;
}

std::vector<NodeIndex> sequence_from_arcs(const std::vector<Arc>& arcs, NodeIndex start) {
  if (arcs.empty()) {
    return {};
  }
  std::vector<bool> used(arcs.size(), false);
  std::vector<NodeIndex> seq{start};
  NodeIndex at = start;
  for (std::size_t step = 0; step < arcs.size(); ++step) {
    // Unique continuation required; otherwise the arc set is not a single walk.
    std::size_t next = arcs.size();
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      if (!used[k] && arcs[k].from == at) {
        if (next != arcs.size()) {
          return {};
        }
        next = k;
      }
    }
    if (next == arcs.size()) {
      return {};
    }
    used[next] = true;
    at = arcs[next].to;
    seq.push_back(at);
  }
  return seq;
}

std::vector<NodeIndex> closed_route(const Instance& inst, VehicleIndex h,
                                    const std::vector<AtmIndex>& atms) {
  if (atms.empty()) {
    return {};
  }
  const NodeIndex depot = inst.vehicles[static_cast<std::size_t>(h)].home_depot;
  std::vector<NodeIndex> nodes;
  nodes.reserve(atms.size() + 2);
  nodes.push_back(depot);
  for (AtmIndex a : atms) {
    nodes.push_back(inst.atm_node(a));
  }
  nodes.push_back(depot);
  return nodes;
}

void derive_plan_bookkeeping(const Instance& inst, Plan& plan) {
  for (AtmIndex a = 0; a < plan.atm_count(); ++a) {
    for (Period t = 0; t < plan.periods(); ++t) {
      plan.depots_for(a, t).clear();
    }
  }
  for (VehicleIndex h = 0; h < plan.vehicle_count(); ++h) {
    const DepotIndex depot = inst.vehicles[static_cast<std::size_t>(h)].home_depot;
    for (Period t = 0; t < plan.periods(); ++t) {
      Route& r = plan.route(h, t);
      r.used = !r.empty();
      r.arrival.clear();
      r.service_start.clear();
      if (r.empty()) {
        continue;
      }
      const Timeline tl = detail::earliest_times(inst, r.nodes, h, r.departure);
      for (const auto& v : tl.visits) {
        r.arrival.push_back(v.arrival);
        r.service_start.push_back(v.service_start);
        auto& ys = plan.depots_for(inst.atm_of(v.node), t);
        if (std::find(ys.begin(), ys.end(), depot) == ys.end()) {
          ys.push_back(depot);
        }
      }
    }
  }
  for (AtmIndex a = 0; a < plan.atm_count(); ++a) {
    for (Period t = 0; t < plan.periods(); ++t) {
      auto& ys = plan.depots_for(a, t);
      std::sort(ys.begin(), ys.end());
    }
  }
}

namespace {

Period parse_period(const std::string& key, int periods, const std::string& path) {
  std::size_t pos = 0;
  int t = 0;
  try {
    t = std::stoi(key, &pos);
  } catch (const std::exception&) {
    throw InputError(path, "period key must be an integer");
  }
  if (pos != key.size() || t < 1 || t > periods) {
    throw InputError(path, "period out of range 1.." + std::to_string(periods));
  }
  return t - 1;
}

VehicleIndex vehicle_by_id(const Instance& inst, const std::string& id, const std::string& path) {
  auto h = inst.find_vehicle(id);
  if (!h) {
    throw InputError(path, "unknown vehicle " + id);
  }
  return *h;
}

AtmIndex atm_by_id(const Instance& inst, const std::string& id, const std::string& path) {
  auto n = inst.find_node(id);
  if (!n || !inst.is_atm(*n)) {
    throw InputError(path, "unknown ATM " + id);
  }
  return inst.atm_of(*n);
}

std::vector<Minutes> minutes_list(const json& v, const std::string& path) {
  detail::as_array(v, path);
  std::vector<Minutes> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(static_cast<Minutes>(detail::as_integer(v[k], detail::index_path(path, k))));
  }
  return out;
}

} // namespace

Plan parse_plan(const Instance& inst, std::string_view text) {
  const json doc = detail::parse_document(text);
  detail::check_schema_version(doc);
  Plan plan(inst);

  const json& routes = detail::require(doc, "routes", "");
  if (!routes.is_object()) {
    throw InputError("routes", "expected an object keyed by vehicle id");
  }
  for (const auto& [vid, per_period] : routes.items()) {
    const auto vpath = detail::join_path("routes", vid);
    const VehicleIndex h = vehicle_by_id(inst, vid, vpath);
    if (!per_period.is_object()) {
      throw InputError(vpath, "expected an object keyed by period");
    }
    for (const auto& [tkey, seq] : per_period.items()) {
      const auto tpath = detail::join_path(vpath, tkey);
      const Period t = parse_period(tkey, inst.periods, tpath);
      detail::as_array(seq, tpath);
      Route& r = plan.route(h, t);
      for (std::size_t k = 0; k < seq.size(); ++k) {
        const auto id = detail::as_id(seq[k], detail::index_path(tpath, k));
        auto n = inst.find_node(id);
        if (!n) {
          throw InputError(detail::index_path(tpath, k), "unknown node " + id);
        }
        r.nodes.push_back(*n);
      }
      if (!r.nodes.empty()) {
        r.departure = inst.depot_window.open;
      }
    }
  }

  if (const json* deposits = detail::optional_field(doc, "deposits")) {
    if (!deposits->is_object()) {
      throw InputError("deposits", "expected an object keyed by ATM id");
    }
    for (const auto& [aid, values] : deposits->items()) {
      const auto apath = detail::join_path("deposits", aid);
      const AtmIndex a = atm_by_id(inst, aid, apath);
      detail::as_array(values, apath, static_cast<std::size_t>(inst.periods));
      for (Period t = 0; t < inst.periods; ++t) {
        plan.deposit(a, t) = detail::as_integer(values[static_cast<std::size_t>(t)],
                                                detail::index_path(apath, static_cast<std::size_t>(t)));
      }
    }
  }

  // Timing given per route: departure alone, or departure with full r/w lists.
  struct GivenTiming {
    bool full = false;
  };
  std::map<std::pair<VehicleIndex, Period>, GivenTiming> given;
  if (const json* timing = detail::optional_field(doc, "timing")) {
    for (const auto& [vid, per_period] : timing->items()) {
      const auto vpath = detail::join_path("timing", vid);
      const VehicleIndex h = vehicle_by_id(inst, vid, vpath);
      for (const auto& [tkey, obj] : per_period.items()) {
        const auto tpath = detail::join_path(vpath, tkey);
        const Period t = parse_period(tkey, inst.periods, tpath);
        Route& r = plan.route(h, t);
        r.departure = static_cast<Minutes>(
          detail::as_integer(detail::require(obj, "departure", tpath), tpath + ".departure"));
        const json* arr = detail::optional_field(obj, "arrival");
        const json* svc = detail::optional_field(obj, "service_start");
        if ((arr == nullptr) != (svc == nullptr)) {
          throw InputError(tpath, "arrival and service_start must be given together");
        }
        if (arr != nullptr) {
          given[{h, t}].full = true;
          r.arrival = minutes_list(*arr, tpath + ".arrival");
          r.service_start = minutes_list(*svc, tpath + ".service_start");
        }
      }
    }
  }

  // Fill what the document left out.
  Plan derived = plan;
  derive_plan_bookkeeping(inst, derived);
  for (VehicleIndex h = 0; h < inst.vehicle_count(); ++h) {
    for (Period t = 0; t < inst.periods; ++t) {
      Route& r = plan.route(h, t);
      const Route& d = derived.route(h, t);
      if (!given[{h, t}].full) {
        r.arrival = d.arrival;
        r.service_start = d.service_start;
      }
      r.used = d.used;
    }
  }

  if (const json* used = detail::optional_field(doc, "vehicle_used")) {
    for (const auto& [vid, flags] : used->items()) {
      const auto vpath = detail::join_path("vehicle_used", vid);
      const VehicleIndex h = vehicle_by_id(inst, vid, vpath);
      detail::as_array(flags, vpath, static_cast<std::size_t>(inst.periods));
      for (Period t = 0; t < inst.periods; ++t) {
        const auto& f = flags[static_cast<std::size_t>(t)];
        if (!f.is_boolean()) {
          throw InputError(detail::index_path(vpath, static_cast<std::size_t>(t)), "expected a boolean");
        }
        plan.route(h, t).used = f.get<bool>();
      }
    }
  }

  if (const json* assignment = detail::optional_field(doc, "assignment")) {
    for (const auto& [aid, per_period] : assignment->items()) {
      const auto apath = detail::join_path("assignment", aid);
      const AtmIndex a = atm_by_id(inst, aid, apath);
      detail::as_array(per_period, apath, static_cast<std::size_t>(inst.periods));
      for (Period t = 0; t < inst.periods; ++t) {
        const auto ppath = detail::index_path(apath, static_cast<std::size_t>(t));
        const auto& list = detail::as_array(per_period[static_cast<std::size_t>(t)], ppath);
        auto& ys = plan.depots_for(a, t);
        for (std::size_t k = 0; k < list.size(); ++k) {
          const auto id = detail::as_id(list[k], detail::index_path(ppath, k));
          auto n = inst.find_node(id);
          if (!n || !inst.is_depot(*n)) {
            throw InputError(detail::index_path(ppath, k), "unknown depot " + id);
          }
          ys.push_back(*n);
        }
      }
    }
  } else {
    for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
      for (Period t = 0; t < inst.periods; ++t) {
        plan.depots_for(a, t) = derived.depots_for(a, t);
      }
    }
  }
  return plan;
}

std::string serialize_plan(const Instance& inst, const Plan& plan) {
  ordered_json doc;
  doc["schema_version"] = 1;

  ordered_json routes = ordered_json::object();
  ordered_json timing = ordered_json::object();
  ordered_json used = ordered_json::object();
  for (VehicleIndex h = 0; h < plan.vehicle_count(); ++h) {
    const auto& vid = inst.vehicles[static_cast<std::size_t>(h)].id;
    ordered_json per_period = ordered_json::object();
    ordered_json per_period_timing = ordered_json::object();
    ordered_json flags = ordered_json::array();
    for (Period t = 0; t < plan.periods(); ++t) {
      const Route& r = plan.route(h, t);
      ordered_json seq = ordered_json::array();
      for (NodeIndex n : r.nodes) {
        seq.push_back(inst.node_id(n));
      }
      per_period[std::to_string(t + 1)] = std::move(seq);
      if (!r.empty() || r.departure != 0 || !r.arrival.empty()) {
        per_period_timing[std::to_string(t + 1)] = {
          {"departure", r.departure}, {"arrival", r.arrival}, {"service_start", r.service_start}};
      }
      flags.push_back(r.used);
    }
    routes[vid] = std::move(per_period);
    if (!per_period_timing.empty()) {
      timing[vid] = std::move(per_period_timing);
    }
    used[vid] = std::move(flags);
  }
  doc["routes"] = std::move(routes);

  ordered_json deposits = ordered_json::object();
  ordered_json assignment = ordered_json::object();
  for (AtmIndex a = 0; a < plan.atm_count(); ++a) {
    const auto& aid = inst.atms[static_cast<std::size_t>(a)].id;
    ordered_json d = ordered_json::array();
    ordered_json y = ordered_json::array();
    for (Period t = 0; t < plan.periods(); ++t) {
      d.push_back(plan.deposit(a, t));
      ordered_json ids = ordered_json::array();
      for (DepotIndex dep : plan.depots_for(a, t)) {
        ids.push_back(inst.node_id(dep));
      }
      y.push_back(std::move(ids));
    }
    deposits[aid] = std::move(d);
    assignment[aid] = std::move(y);
  }
  doc["deposits"] = std::move(deposits);
  doc["timing"] = std::move(timing);
  doc["vehicle_used"] = std::move(used);
  doc["assignment"] = std::move(assignment);
  return doc.dump(1) + "\n";
}

} // namespace atmroute
