#include "atmroute/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"
#include "rng.hpp"

namespace atmroute {

using detail::json;
using detail::ordered_json;

std::string profile_name(WithdrawalProfile p) {
  switch (p) {
  case WithdrawalProfile::uniform:
    return "uniform";
  case WithdrawalProfile::frontloaded:
    return "frontloaded";
  case WithdrawalProfile::weekend_spike:
    return "weekend_spike";
  }
  return "uniform";
}

namespace {

WithdrawalProfile profile_from(const std::string& name, const std::string& path) {
  for (auto p : {WithdrawalProfile::uniform, WithdrawalProfile::frontloaded, WithdrawalProfile::weekend_spike}) {
    if (profile_name(p) == name) {
      return p;
    }
  }
  throw InputError(path, "unknown withdrawal profile '" + name + "'");
}

void require_that(bool ok, const char* field, const char* what) {
  if (!ok) {
    throw std::invalid_argument(std::string(field) + ": " + what);
  }
}

// Relative withdrawal weight of period t (0-based).
std::int64_t profile_weight(WithdrawalProfile p, int t, int periods) {
  switch (p) {
  case WithdrawalProfile::uniform:
    return 1;
  case WithdrawalProfile::frontloaded:
    return periods - t;
  case WithdrawalProfile::weekend_spike:
    return (t % 7 == 5 || t % 7 == 6) ? 2 : 1;
  }
  return 1;
}

// Units of `granularity`, split by weight; leftover units go to the earliest
// periods so the parts sum exactly to the total.
std::vector<Money> spread(Money total_units, WithdrawalProfile profile, int periods, Money granularity) {
  std::int64_t weight_sum = 0;
  for (int t = 0; t < periods; ++t) {
    weight_sum += profile_weight(profile, t, periods);
  }
  std::vector<Money> out(static_cast<std::size_t>(periods));
  Money used = 0;
  for (int t = 0; t < periods; ++t) {
    out[static_cast<std::size_t>(t)] = total_units * profile_weight(profile, t, periods) / weight_sum;
    used += out[static_cast<std::size_t>(t)];
  }
  for (int t = 0; used < total_units; t = (t + 1) % periods, ++used) {
    ++out[static_cast<std::size_t>(t)];
  }
  for (auto& m : out) {
    m *= granularity;
  }
  return out;
}

Meters euclidean(const Position& a, const Position& b) {
  const double km = std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
  return static_cast<Meters>(std::llround(km * 10.0)) * 100; // 0.1 km steps
}

MoneyRange range_from(const json& v, const std::string& path) {
  detail::as_array(v, path, 2);
  return {detail::as_integer(v[0], detail::index_path(path, 0)), detail::as_integer(v[1], detail::index_path(path, 1))};
}

} // namespace

void validate_params(const ScenarioParams& p) {
  require_that(p.n_atms >= 1, "n_atms", "must be at least 1");
  require_that(p.n_depots >= 1, "n_depots", "must be at least 1");
  require_that(p.vehicles_per_depot >= 0, "vehicles_per_depot", "must be nonnegative");
  require_that(p.periods >= 1, "periods", "must be at least 1");
  require_that(p.total_demand_range.low > 0 && p.total_demand_range.low <= p.total_demand_range.high,
               "total_demand_range", "must satisfy 0 < low <= high");
  require_that(p.per_deposit_range.low > 0 && p.per_deposit_range.low <= p.per_deposit_range.high,
               "per_deposit_range", "must satisfy 0 < low <= high");
  require_that(std::isfinite(p.interest_rate) && p.interest_rate >= 0, "interest_rate", "must be finite and nonnegative");
  require_that(std::isfinite(p.area_extent_km) && p.area_extent_km > 0, "area_extent_km", "must be positive");
  require_that(p.vehicle_capacity >= 0, "vehicle_capacity", "must be nonnegative");
  require_that(p.cost_per_km >= 0, "cost_per_km", "must be nonnegative");
  require_that(std::isfinite(p.speed_kmh) && p.speed_kmh > 0, "speed_kmh", "must be positive");
  require_that(p.depot_window.open < p.depot_window.close, "depot_window", "must open before it closes");
  require_that(p.max_route_time > 0, "max_route_time_min", "must be positive");
  require_that(!p.max_total_distance_km || *p.max_total_distance_km >= 0, "max_total_distance_km",
               "must be nonnegative");
  require_that(p.service_time_min >= 0 && p.service_time_min <= p.service_time_max, "service_time",
               "must satisfy 0 <= min <= max");
  require_that(p.demand_granularity > 0, "demand_granularity", "must be positive");
  require_that(p.total_demand_range.high / p.demand_granularity >= 1, "total_demand_range",
               "must hold at least one granularity unit");
}

ScenarioParams parse_scenario_params(std::string_view text) {
  const json doc = detail::parse_document(text);
  detail::check_schema_version(doc);
  static const std::set<std::string> known{
    "schema_version", "n_atms", "n_depots", "vehicles_per_depot", "periods", "total_demand_range",
    "per_deposit_range", "interest_rate", "area_extent_km", "withdrawal_profile", "seed",
    "vehicle_capacity", "cost_per_km", "speed_kmh", "depot_window", "max_route_time_min",
    "max_total_distance_km", "service_time_min", "service_time_max", "demand_granularity"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) {
      throw InputError(key, "unknown field");
    }
  }
  ScenarioParams p;
  auto int_field = [&](const char* key, auto& out) {
    if (const json* v = detail::optional_field(doc, key)) {
      out = static_cast<std::remove_reference_t<decltype(out)>>(detail::as_integer(*v, key));
    }
  };
  int_field("n_atms", p.n_atms);
  int_field("n_depots", p.n_depots);
  int_field("vehicles_per_depot", p.vehicles_per_depot);
  int_field("periods", p.periods);
  int_field("vehicle_capacity", p.vehicle_capacity);
  int_field("cost_per_km", p.cost_per_km);
  int_field("max_route_time_min", p.max_route_time);
  int_field("service_time_min", p.service_time_min);
  int_field("service_time_max", p.service_time_max);
  int_field("demand_granularity", p.demand_granularity);
  if (const json* v = detail::optional_field(doc, "seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      throw InputError("seed", "expected a nonnegative integer");
    }
    p.seed = v->get<std::uint64_t>();
  }
  if (const json* v = detail::optional_field(doc, "total_demand_range")) {
    p.total_demand_range = range_from(*v, "total_demand_range");
  }
  if (const json* v = detail::optional_field(doc, "per_deposit_range")) {
    p.per_deposit_range = range_from(*v, "per_deposit_range");
  }
  if (const json* v = detail::optional_field(doc, "interest_rate")) {
    p.interest_rate = detail::as_number(*v, "interest_rate");
  }
  if (const json* v = detail::optional_field(doc, "area_extent_km")) {
    p.area_extent_km = detail::as_number(*v, "area_extent_km");
  }
  if (const json* v = detail::optional_field(doc, "speed_kmh")) {
    p.speed_kmh = detail::as_number(*v, "speed_kmh");
  }
  if (const json* v = detail::optional_field(doc, "max_total_distance_km")) {
    p.max_total_distance_km = detail::as_number(*v, "max_total_distance_km");
  }
  if (const json* v = detail::optional_field(doc, "withdrawal_profile")) {
    p.withdrawal_profile = profile_from(detail::as_id(*v, "withdrawal_profile"), "withdrawal_profile");
  }
  if (const json* v = detail::optional_field(doc, "depot_window")) {
    detail::as_array(*v, "depot_window", 2);
    p.depot_window = {static_cast<Minutes>(detail::as_integer((*v)[0], "depot_window[0]")),
                      static_cast<Minutes>(detail::as_integer((*v)[1], "depot_window[1]"))};
  }
  try {
    validate_params(p);
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    throw InputError(msg.substr(0, colon), msg.substr(colon + 2));
  }
  return p;
}

std::string serialize_scenario_params(const ScenarioParams& p) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["n_atms"] = p.n_atms;
  doc["n_depots"] = p.n_depots;
  doc["vehicles_per_depot"] = p.vehicles_per_depot;
  doc["periods"] = p.periods;
  doc["total_demand_range"] = {p.total_demand_range.low, p.total_demand_range.high};
  doc["per_deposit_range"] = {p.per_deposit_range.low, p.per_deposit_range.high};
  doc["interest_rate"] = p.interest_rate;
  doc["area_extent_km"] = p.area_extent_km;
  doc["withdrawal_profile"] = profile_name(p.withdrawal_profile);
  doc["seed"] = p.seed;
  doc["vehicle_capacity"] = p.vehicle_capacity;
  doc["cost_per_km"] = p.cost_per_km;
  doc["speed_kmh"] = p.speed_kmh;
  doc["depot_window"] = {p.depot_window.open, p.depot_window.close};
  doc["max_route_time_min"] = p.max_route_time;
  doc["max_total_distance_km"] = p.max_total_distance_km ? ordered_json(*p.max_total_distance_km) : ordered_json();
  doc["service_time_min"] = p.service_time_min;
  doc["service_time_max"] = p.service_time_max;
  doc["demand_granularity"] = p.demand_granularity;
  return doc.dump(1) + "\n";
}

Instance generate_scenario(const ScenarioParams& params) {
  validate_params(params);
  detail::Rng rng(params.seed);
  Instance inst;
  inst.periods = params.periods;
  inst.interest_rate_ppm = std::llround(params.interest_rate * 1e6);
  inst.depot_window = params.depot_window;
  inst.max_route_time = params.max_route_time;
  if (params.max_total_distance_km) {
    inst.max_total_distance = km_to_meters(*params.max_total_distance_km);
  }
  inst.split_bounds = SplitBounds{params.per_deposit_range.low, params.per_deposit_range.high};

  auto point = [&] {
    // Positions on a 10 m grid keep the files short.
    const double x = std::round(rng.unit() * params.area_extent_km * 100.0) / 100.0;
    const double y = std::round(rng.unit() * params.area_extent_km * 100.0) / 100.0;
    return Position{x, y};
  };
  for (int d = 0; d < params.n_depots; ++d) {
    std::ostringstream id;
    id << (d + 1 < 10 ? "0" : "") << d + 1;
    inst.depots.push_back({id.str(), point()});
  }
  static constexpr Minutes opens[] = {480, 510, 540};
  static constexpr Minutes closes[] = {900, 960, 1020};
  const Money g = params.demand_granularity;
  const Money lo_units = (params.total_demand_range.low + g - 1) / g;
  const Money hi_units = std::max(lo_units, params.total_demand_range.high / g);
  for (int a = 0; a < params.n_atms; ++a) {
    Atm atm;
    atm.id = std::to_string(a + 1);
    atm.position = point();
    const Money units = rng.between(lo_units, hi_units);
    atm.total_demand = units * g;
    atm.forecast_withdrawals = spread(units, params.withdrawal_profile, params.periods, g);
    atm.initial_balance = atm.forecast_withdrawals.front();
    atm.service_time = static_cast<Minutes>(rng.between(params.service_time_min, params.service_time_max));
    atm.service_window = {opens[rng.below(3)], closes[rng.below(3)]};
    inst.atms.push_back(std::move(atm));
  }
  int vid = 1;
  for (int d = 0; d < params.n_depots; ++d) {
    for (int k = 0; k < params.vehicles_per_depot; ++k) {
      Vehicle v;
      v.id = std::to_string(vid++);
      v.home_depot = d;
      v.capacity = params.vehicle_capacity;
      v.cost_per_km = params.cost_per_km;
      v.speed_kmh = params.speed_kmh;
      inst.vehicles.push_back(std::move(v));
    }
  }

  const auto V = static_cast<std::size_t>(inst.node_count());
  std::vector<Position> where;
  for (const auto& d : inst.depots) {
    where.push_back(*d.position);
  }
  for (const auto& a : inst.atms) {
    where.push_back(*a.position);
  }
  inst.distance = Matrix<Meters>(V, V, 0);
  for (std::size_t i = 0; i < V; ++i) {
    for (std::size_t j = 0; j < V; ++j) {
      inst.distance(i, j) = i == j ? 0 : euclidean(where[i], where[j]);
    }
  }
  derive_travel_times(inst);
  return inst;
}

std::vector<std::string> node_order(const Instance& inst) {
  std::vector<std::string> ids;
  for (const auto& d : inst.depots) {
    ids.push_back(d.id);
  }
  for (const auto& a : inst.atms) {
    ids.push_back(a.id);
  }
  return ids;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return cells;
}

} // namespace

Matrix<Meters> ingest_distance_matrix(std::string_view csv, const std::vector<std::string>& order) {
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto nl = csv.find('\n', start);
    const auto line = csv.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!trim(line).empty()) {
      rows.push_back(split_row(line));
    }
    if (nl == std::string_view::npos) {
      break;
    }
    start = nl + 1;
  }
  const std::size_t V = order.size();
  if (rows.empty()) {
    throw InputError("header", "empty distance file");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < V; ++i) {
    index[order[i]] = i;
  }

  // Header: node ids, optionally preceded by a corner cell.
  std::vector<std::string> header = rows.front();
  if (header.size() == V + 1 && !index.count(header.front())) {
    header.erase(header.begin());
  }
  if (header.size() != V) {
    throw InputError("header", "expected " + std::to_string(V) + " node ids, got " + std::to_string(header.size()));
  }
  std::vector<std::size_t> column(V);
  std::vector<bool> seen(V, false);
  for (std::size_t c = 0; c < V; ++c) {
    auto it = index.find(header[c]);
    if (it == index.end() || seen[it->second]) {
      throw InputError("header[" + std::to_string(c) + "]", "unknown or repeated node id '" + header[c] + "'");
    }
    seen[it->second] = true;
    column[c] = it->second;
  }
  if (rows.size() - 1 != V) {
    throw InputError("rows", "expected " + std::to_string(V) + " data rows, got " + std::to_string(rows.size() - 1));
  }

  Matrix<Meters> out(V, V, 0);
  std::vector<bool> row_seen(V, false);
  for (std::size_t r = 0; r < V; ++r) {
    auto cells = rows[r + 1];
    std::size_t target = column[r];
    const std::string rpath = "row " + std::to_string(r + 1);
    if (cells.size() == V + 1) {
      auto it = index.find(cells.front());
      if (it == index.end()) {
        throw InputError(rpath, "unknown node id '" + cells.front() + "'");
      }
      target = it->second;
      cells.erase(cells.begin());
    } else if (cells.size() != V) {
      throw InputError(rpath, "expected " + std::to_string(V) + " values, got " + std::to_string(cells.size()));
    }
    if (row_seen[target]) {
      throw InputError(rpath, "repeated row for node '" + order[target] + "'");
    }
    row_seen[target] = true;
    for (std::size_t c = 0; c < V; ++c) {
      const std::string cpath = "cell(" + order[target] + "," + order[column[c]] + ")";
      const std::string& text = cells[c];
      char* end = nullptr;
      const double km = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size()) {
        throw InputError(cpath, "not a number: '" + text + "'");
      }
      if (!std::isfinite(km)) {
        throw InputError(cpath, "non-finite distance");
      }
      if (km < 0) {
        throw InputError(cpath, "negative distance");
      }
      out(target, column[c]) = target == column[c] ? 0 : km_to_meters(km);
    }
  }
  return out;
}

void apply_distance_matrix(Instance& inst, Matrix<Meters> distance) {
  const auto V = static_cast<std::size_t>(inst.node_count());
  if (distance.rows() != V || distance.cols() != V) {
    throw std::invalid_argument("distance matrix dimensions do not match the instance");
  }
  inst.distance = std::move(distance);
  if (!inst.explicit_travel_time) {
    derive_travel_times(inst);
  }
}

} // namespace atmroute
