#include "atmroute/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace atmroute {

using detail::json;
using detail::ordered_json;

const std::string& Instance::node_id(NodeIndex n) const {
  if (is_depot(n)) {
    return depots[static_cast<std::size_t>(n)].id;
  }
  if (is_atm(n)) {
    return atms[static_cast<std::size_t>(atm_of(n))].id;
  }
  throw std::out_of_range("node index " + std::to_string(n) + " out of range");
}

std::optional<NodeIndex> Instance::find_node(std::string_view id) const {
  for (NodeIndex n = 0; n < node_count(); ++n) {
    if (node_id(n) == id) {
      return n;
    }
  }
  return std::nullopt;
}

std::optional<VehicleIndex> Instance::find_vehicle(std::string_view id) const {
  for (VehicleIndex h = 0; h < vehicle_count(); ++h) {
    if (vehicles[static_cast<std::size_t>(h)].id == id) {
      return h;
    }
  }
  return std::nullopt;
}

Money Instance::arc_cost(VehicleIndex h, NodeIndex i, NodeIndex j) const {
  const Money per_km = vehicles[static_cast<std::size_t>(h)].cost_per_km;
  return (per_km * distance(i, j) + 500) / 1000;
}

Minutes travel_minutes(Meters distance, double speed_kmh) {
  // minutes = km / (km/h) * 60
  const double minutes = static_cast<double>(distance) * 60.0 / (speed_kmh * 1000.0);
  return static_cast<Minutes>(std::floor(minutes + 0.5));
}

void derive_travel_times(Instance& inst) {
  if (inst.explicit_travel_time) {
    return;
  }
  const auto v = static_cast<std::size_t>(inst.node_count());
  inst.travel_time.clear();
  inst.travel_time.reserve(inst.vehicles.size());
  for (const auto& vehicle : inst.vehicles) {
    Matrix<Minutes> t(v, v, 0);
    for (std::size_t i = 0; i < v; ++i) {
      for (std::size_t j = 0; j < v; ++j) {
        if (i != j && inst.distance.rows() == v && inst.distance.cols() == v) {
          t(i, j) = travel_minutes(inst.distance(i, j), vehicle.speed_kmh);
        }
      }
    }
    inst.travel_time.push_back(std::move(t));
  }
}

namespace {

bool is_depot_id(const std::string& id) {
  return id.size() >= 2 && id[0] == '0' &&
         std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
         std::any_of(id.begin() + 1, id.end(), [](char c) { return c != '0'; });
}

bool is_atm_id(const std::string& id) {
  return !id.empty() && id[0] >= '1' && id[0] <= '9' &&
         std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string cell(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

} // namespace

std::vector<Defect> validate_instance(const Instance& inst) {
  std::vector<Defect> defects;
  auto add = [&](std::string path, std::string message) {
    defects.push_back({std::move(path), std::move(message)});
  };

  if (inst.periods < 1) {
    add("periods", "periods must be at least 1");
  }
  if (inst.depots.empty()) {
    add("depots", "at least one depot required");
  }
  if (inst.atms.empty()) {
    add("atms", "at least one ATM required");
  }
  if (inst.vehicles.empty()) {
    add("vehicles", "at least one vehicle required");
  }

  std::set<std::string> ids;
  for (std::size_t d = 0; d < inst.depots.size(); ++d) {
    const auto path = detail::index_path("depots", d) + ".id";
    if (!is_depot_id(inst.depots[d].id)) {
      add(path, "depot id must look like 01, 02, ...");
    }
    if (!ids.insert(inst.depots[d].id).second) {
      add(path, "duplicate node id " + inst.depots[d].id);
    }
  }

  for (std::size_t a = 0; a < inst.atms.size(); ++a) {
    const auto& atm = inst.atms[a];
    const auto path = detail::index_path("atms", a);
    if (!is_atm_id(atm.id)) {
      add(path + ".id", "ATM id must be a positive integer");
    }
    if (!ids.insert(atm.id).second) {
      add(path + ".id", "duplicate node id " + atm.id);
    }
    if (atm.service_window.open == atm.service_window.close) {
      add(path + ".service_window", "service_window degenerate");
    } else if (atm.service_window.open > atm.service_window.close) {
      add(path + ".service_window", "service_window inverted");
    }
    if (atm.service_time < 0) {
      add(path + ".service_time_min", "service time negative");
    }
    if (atm.initial_balance < 0) {
      add(path + ".initial_balance", "initial balance negative");
    }
    if (atm.total_demand < 0) {
      add(path + ".total_demand", "total demand negative");
    }
    if (static_cast<int>(atm.forecast_withdrawals.size()) != inst.periods) {
      add(path + ".forecast_withdrawals", "forecast length differs from periods");
    }
    for (std::size_t t = 0; t < atm.forecast_withdrawals.size(); ++t) {
      if (atm.forecast_withdrawals[t] < 0) {
        add(detail::index_path(path + ".forecast_withdrawals", t), "withdrawal negative");
      }
    }
  }

  for (std::size_t h = 0; h < inst.vehicles.size(); ++h) {
    const auto& v = inst.vehicles[h];
    const auto path = detail::index_path("vehicles", h);
    if (v.home_depot < 0 || v.home_depot >= inst.depot_count()) {
      add(path + ".home_depot", "home depot unknown");
    }
    if (v.capacity <= 0) {
      add(path + ".capacity", "capacity must be positive");
    }
    if (v.cost_per_km < 0) {
      add(path + ".cost_per_km", "cost per km negative");
    }
    if (!(v.speed_kmh > 0) || !std::isfinite(v.speed_kmh)) {
      add(path + ".speed_kmh", "speed must be positive");
    }
    if (v.fixed_cost_per_trip < 0) {
      add(path + ".fixed_cost_per_trip", "fixed cost negative");
    }
  }

  const auto n = static_cast<std::size_t>(inst.node_count());
  if (inst.distance.rows() != n || inst.distance.cols() != n) {
    add("distance_km", "distance matrix is not VxV");
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto d = inst.distance(i, j);
        if (d < 0) {
          add("distance_km" + cell(i, j), "distance negative at " + cell(i, j));
        } else if (i == j && d != 0) {
          add("distance_km" + cell(i, j), "distance diagonal nonzero at " + cell(i, j));
        }
      }
    }
  }

  if (inst.travel_time.size() != inst.vehicles.size()) {
    add("travel_time_min", "one travel time matrix per vehicle required");
  } else {
    for (std::size_t h = 0; h < inst.travel_time.size(); ++h) {
      const auto& t = inst.travel_time[h];
      const auto path = detail::index_path("travel_time_min", h);
      if (t.rows() != n || t.cols() != n) {
        add(path, "travel time matrix is not VxV");
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (t(i, j) < 0) {
            add(path + cell(i, j), "travel time negative at " + cell(i, j));
          } else if (i == j && t(i, j) != 0) {
            add(path + cell(i, j), "travel time diagonal nonzero at " + cell(i, j));
          }
        }
      }
    }
  }

  if (inst.depot_window.open >= inst.depot_window.close) {
    add("depot_window", "depot window must satisfy e_0 < l_0");
  }
  if (inst.interest_rate_ppm < 0) {
    add("interest_rate_annual", "interest rate negative");
  }
  if (inst.max_route_time < 0) {
    add("max_route_time_min", "max route time negative");
  }
  if (inst.max_total_distance && *inst.max_total_distance < 0) {
    add("max_total_distance_km", "max total distance negative");
  }
  if (inst.split_bounds) {
    if (inst.split_bounds->lower <= 0 || inst.split_bounds->lower > inst.split_bounds->upper) {
      add("split_bounds", "split bounds must satisfy 0 < lower <= upper");
    }
  }
  return defects;
}

namespace {

TimeWindow parse_window(const json& v, const std::string& path) {
  detail::as_array(v, path, 2);
  return {static_cast<Minutes>(detail::as_integer(v[0], detail::index_path(path, 0))),
          static_cast<Minutes>(detail::as_integer(v[1], detail::index_path(path, 1)))};
}

std::optional<Position> parse_position(const json& obj) {
  const json* p = detail::optional_field(obj, "position");
  if (p == nullptr) {
    return std::nullopt;
  }
  return Position{detail::as_number(detail::require(*p, "x_km", "position"), "position.x_km"),
                  detail::as_number(detail::require(*p, "y_km", "position"), "position.y_km")};
}

template <class Json> void put_position(Json& obj, const std::optional<Position>& p) {
  if (p) {
    obj["position"] = {{"x_km", p->x_km}, {"y_km", p->y_km}};
  }
}

} // namespace

Instance parse_instance(std::string_view text) {
  const json doc = detail::parse_document(text);
  detail::check_schema_version(doc);

  Instance inst;
  inst.periods = static_cast<int>(detail::as_integer(detail::require(doc, "periods", ""), "periods"));

  const auto& depots = detail::as_array(detail::require(doc, "depots", ""), "depots");
  for (std::size_t d = 0; d < depots.size(); ++d) {
    const auto path = detail::index_path("depots", d);
    Depot depot;
    depot.id = detail::as_id(detail::require(depots[d], "id", path), path + ".id");
    depot.position = parse_position(depots[d]);
    inst.depots.push_back(std::move(depot));
  }

  const auto& atms = detail::as_array(detail::require(doc, "atms", ""), "atms");
  for (std::size_t a = 0; a < atms.size(); ++a) {
    const auto path = detail::index_path("atms", a);
    const auto& obj = atms[a];
    Atm atm;
    atm.id = detail::as_id(detail::require(obj, "id", path), path + ".id");
    atm.initial_balance = detail::as_integer(detail::require(obj, "initial_balance", path),
                                             path + ".initial_balance");
    atm.service_window =
      parse_window(detail::require(obj, "service_window", path), path + ".service_window");
    atm.service_time = static_cast<Minutes>(detail::as_integer(
      detail::require(obj, "service_time_min", path), path + ".service_time_min"));
    const auto fpath = path + ".forecast_withdrawals";
    const auto& forecast = detail::as_array(detail::require(obj, "forecast_withdrawals", path),
                                            fpath, static_cast<std::size_t>(std::max(inst.periods, 0)));
    for (std::size_t t = 0; t < forecast.size(); ++t) {
      atm.forecast_withdrawals.push_back(detail::as_integer(forecast[t], detail::index_path(fpath, t)));
    }
    atm.total_demand = 0;
    if (const json* td = detail::optional_field(obj, "total_demand")) {
      atm.total_demand = detail::as_integer(*td, path + ".total_demand");
    }
    atm.position = parse_position(obj);
    inst.atms.push_back(std::move(atm));
  }

  const auto& vehicles = detail::as_array(detail::require(doc, "vehicles", ""), "vehicles");
  for (std::size_t h = 0; h < vehicles.size(); ++h) {
    const auto path = detail::index_path("vehicles", h);
    const auto& obj = vehicles[h];
    Vehicle v;
    v.id = detail::as_id(detail::require(obj, "id", path), path + ".id");
    const auto depot_id = detail::as_id(detail::require(obj, "home_depot", path), path + ".home_depot");
    auto it = std::find_if(inst.depots.begin(), inst.depots.end(),
                           [&](const Depot& d) { return d.id == depot_id; });
    if (it == inst.depots.end()) {
      throw InputError(path + ".home_depot", "unknown depot " + depot_id);
    }
    v.home_depot = static_cast<DepotIndex>(it - inst.depots.begin());
    v.capacity = detail::as_integer(detail::require(obj, "capacity", path), path + ".capacity");
    v.cost_per_km =
      detail::as_integer(detail::require(obj, "cost_per_km", path), path + ".cost_per_km");
    if (const json* s = detail::optional_field(obj, "speed_kmh")) {
      v.speed_kmh = detail::as_number(*s, path + ".speed_kmh");
    }
    if (const json* f = detail::optional_field(obj, "fixed_cost_per_trip")) {
      v.fixed_cost_per_trip = detail::as_integer(*f, path + ".fixed_cost_per_trip");
    }
    inst.vehicles.push_back(std::move(v));
  }

  const auto n = static_cast<std::size_t>(inst.node_count());
  const auto& dist = detail::as_array(detail::require(doc, "distance_km", ""), "distance_km");
  if (dist.size() != n) {
    throw InputError("distance_km", "dimension mismatch: expected " + std::to_string(n) + " rows, got " +
                                      std::to_string(dist.size()));
  }
  inst.distance = Matrix<Meters>(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto rpath = detail::index_path("distance_km", i);
    const auto& row = detail::as_array(dist[i], rpath);
    if (row.size() != n) {
      throw InputError(rpath, "dimension mismatch: expected " + std::to_string(n) + " columns, got " +
                                std::to_string(row.size()));
    }
    for (std::size_t j = 0; j < n; ++j) {
      inst.distance(i, j) = km_to_meters(detail::as_number(row[j], detail::index_path(rpath, j)));
    }
  }

  if (const json* tt = detail::optional_field(doc, "travel_time_min")) {
    detail::as_array(*tt, "travel_time_min", inst.vehicles.size());
    inst.explicit_travel_time = true;
    for (std::size_t h = 0; h < inst.vehicles.size(); ++h) {
      const auto hpath = detail::index_path("travel_time_min", h);
      const auto& mat = detail::as_array((*tt)[h], hpath, n);
      Matrix<Minutes> t(n, n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const auto rpath = detail::index_path(hpath, i);
        const auto& row = detail::as_array(mat[i], rpath, n);
        for (std::size_t j = 0; j < n; ++j) {
          t(i, j) = static_cast<Minutes>(detail::as_integer(row[j], detail::index_path(rpath, j)));
        }
      }
      inst.travel_time.push_back(std::move(t));
    }
  } else {
    derive_travel_times(inst);
  }

  if (const json* ir = detail::optional_field(doc, "interest_rate_annual")) {
    inst.interest_rate_ppm = std::llround(detail::as_number(*ir, "interest_rate_annual") * 1e6);
  }
  if (const json* w = detail::optional_field(doc, "depot_window")) {
    inst.depot_window = parse_window(*w, "depot_window");
  }
  if (const json* t = detail::optional_field(doc, "max_route_time_min")) {
    inst.max_route_time = static_cast<Minutes>(detail::as_integer(*t, "max_route_time_min"));
  } else {
    inst.max_route_time = inst.depot_window.close - inst.depot_window.open;
  }
  if (const json* c = detail::optional_field(doc, "max_total_distance_km")) {
    inst.max_total_distance = km_to_meters(detail::as_number(*c, "max_total_distance_km"));
  }
  if (const json* b = detail::optional_field(doc, "split_bounds")) {
    inst.split_bounds =
      SplitBounds{detail::as_integer(detail::require(*b, "lower", "split_bounds"), "split_bounds.lower"),
                  detail::as_integer(detail::require(*b, "upper", "split_bounds"), "split_bounds.upper")};
  }

  const auto defects = validate_instance(inst);
  if (!defects.empty()) {
    throw InputError(defects.front().path, defects.front().message);
  }
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["periods"] = inst.periods;

  doc["depots"] = ordered_json::array();
  for (const auto& d : inst.depots) {
    ordered_json obj;
    obj["id"] = d.id;
    put_position(obj, d.position);
    doc["depots"].push_back(std::move(obj));
  }

  doc["atms"] = ordered_json::array();
  for (const auto& a : inst.atms) {
    ordered_json obj;
    obj["id"] = a.id;
    obj["initial_balance"] = a.initial_balance;
    obj["service_window"] = {a.service_window.open, a.service_window.close};
    obj["service_time_min"] = a.service_time;
    obj["forecast_withdrawals"] = a.forecast_withdrawals;
    obj["total_demand"] = a.total_demand;
    put_position(obj, a.position);
    doc["atms"].push_back(std::move(obj));
  }

  doc["vehicles"] = ordered_json::array();
  for (const auto& v : inst.vehicles) {
    ordered_json obj;
    obj["id"] = v.id;
    obj["home_depot"] = inst.depots[static_cast<std::size_t>(v.home_depot)].id;
    obj["capacity"] = v.capacity;
    obj["cost_per_km"] = v.cost_per_km;
    obj["speed_kmh"] = v.speed_kmh;
    obj["fixed_cost_per_trip"] = v.fixed_cost_per_trip;
    doc["vehicles"].push_back(std::move(obj));
  }

  const auto n = inst.distance.rows();
  ordered_json dist = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < inst.distance.cols(); ++j) {
      row.push_back(meters_to_km(inst.distance(i, j)));
    }
    dist.push_back(std::move(row));
  }
  doc["distance_km"] = std::move(dist);

  if (inst.explicit_travel_time) {
    ordered_json tt = ordered_json::array();
    for (const auto& t : inst.travel_time) {
      ordered_json mat = ordered_json::array();
      for (std::size_t i = 0; i < t.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < t.cols(); ++j) {
          row.push_back(t(i, j));
        }
        mat.push_back(std::move(row));
      }
      tt.push_back(std::move(mat));
    }
    doc["travel_time_min"] = std::move(tt);
  }

  doc["interest_rate_annual"] = static_cast<double>(inst.interest_rate_ppm) / 1e6;
  doc["depot_window"] = {inst.depot_window.open, inst.depot_window.close};
  doc["max_route_time_min"] = inst.max_route_time;
  if (inst.max_total_distance) {
    doc["max_total_distance_km"] = meters_to_km(*inst.max_total_distance);
  } else {
    doc["max_total_distance_km"] = nullptr;
  }
  if (inst.split_bounds) {
    doc["split_bounds"] = {{"lower", inst.split_bounds->lower}, {"upper", inst.split_bounds->upper}};
  }
  return doc.dump(1) + "\n";
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError(path, "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InputError(path, "cannot write file");
  }
  out << text;
}

Instance load_instance(const std::string& path) {
  return parse_instance(load_text(path));
}

} // namespace atmroute
