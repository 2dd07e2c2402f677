#include "atmroute/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"

namespace atmroute {

using detail::json;
using detail::ordered_json;

std::string mode_name(SplitMode mode) {
  return mode == SplitMode::split ? "split" : "no-split";
}

SplitMode parse_mode(std::string_view name) {
  if (name == "split") {
    return SplitMode::split;
  }
  if (name == "no-split" || name == "no_split") {
    return SplitMode::no_split;
  }
  throw InputError("policy", "expected split or no-split, got '" + std::string(name) + "'");
}

std::string with_thousands(long long value) {
  std::string digits = std::to_string(value < 0 ? -static_cast<unsigned long long>(value)
                                                : static_cast<unsigned long long>(value));
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0 && (digits.size() - i) % 3 == 0) {
      out += ',';
    }
    out += digits[i];
  }
  return value < 0 ? "-" + out : out;
}

PolicyOutcome summarize(SplitMode mode, const SolveResult& result) {
  PolicyOutcome o;
  o.mode = mode;
  o.status = result.status;
  o.trips = result.cost.trips;
  o.total_distance = result.cost.total_distance;
  o.transport_cost = result.cost.transport;
  o.financial_cost = result.cost.financial;
  o.total_cost = o.transport_cost + o.financial_cost;
  return o;
}

ComparisonReport make_report(const SolveResult& no_split, const SolveResult& split, std::uint64_t seed) {
  ComparisonReport r;
  r.seed = seed;
  r.policies[0] = summarize(SplitMode::no_split, no_split);
  r.policies[1] = summarize(SplitMode::split, split);
  std::string failing;
  for (const auto& p : r.policies) {
    if (!p.feasible()) {
      failing += (failing.empty() ? "" : ",") + mode_name(p.mode);
    }
  }
  r.complete = failing.empty();
  r.failing_policy = failing;
  if (r.complete && r.no_split().total_cost != 0) {
    r.improvement_percent = 100.0 * static_cast<double>(r.no_split().total_cost - r.split().total_cost) /
                            static_cast<double>(r.no_split().total_cost);
  }
  return r;
}

Comparison compare_policies(const Instance& inst, const SolveConfig& cfg) {
  Comparison c;
  const SplitSchedule whole = build_split_schedule(inst, make_policy(inst, SplitMode::no_split));
  const SplitSchedule split = build_split_schedule(inst, make_policy(inst, SplitMode::split));
  c.no_split = solve(inst, whole, cfg);
  c.split = solve(inst, split, cfg);
  c.report = make_report(c.no_split, c.split, cfg.seed);
  return c;
}

namespace {

SolveStatus parse_status(const std::string& s, const std::string& path) {
  for (auto st : {SolveStatus::optimal, SolveStatus::feasible, SolveStatus::infeasible, SolveStatus::timeout}) {
    if (status_name(st) == s) {
      return st;
    }
  }
  throw InputError(path, "unknown status '" + s + "'");
}

std::string km_text(Meters m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", meters_to_km(m));
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

} // namespace

std::string render_report(const ComparisonReport& report, ReportFormat format) {
  if (format == ReportFormat::structured) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["seed"] = report.seed;
    doc["complete"] = report.complete;
    doc["failing_policy"] = report.failing_policy;
    doc["improvement_percent"] = report.improvement_percent ? ordered_json(*report.improvement_percent) : ordered_json();
    ordered_json policies = ordered_json::object();
    for (const auto& p : report.policies) {
      policies[p.mode == SplitMode::split ? "split" : "no_split"] = {
        {"status", status_name(p.status)},       {"trips", p.trips},
        {"total_distance_m", p.total_distance},  {"transport_cost", p.transport_cost},
        {"financial_cost", p.financial_cost},    {"total_cost", p.total_cost}};
    }
    doc["policies"] = std::move(policies);
    return doc.dump(1) + "\n";
  }

  constexpr std::size_t label_w = 24;
  constexpr std::size_t col_w = 20;
  std::ostringstream out;
  auto row = [&](const std::string& label, auto cell) {
    out << pad(label, label_w);
    for (const auto& p : report.policies) {
      out << pad(p.feasible() ? cell(p) : std::string("infeasible"), col_w);
    }
    out << "\n";
  };
  out << pad("", label_w) << pad("No split", col_w) << pad("Split", col_w) << "\n";
  out << pad("Status", label_w);
  for (const auto& p : report.policies) {
    out << pad(status_name(p.status), col_w);
  }
  out << "\n";
  row("Total trips", [](const PolicyOutcome& p) { return std::to_string(p.trips); });
  row("Total distance (km)", [](const PolicyOutcome& p) { return km_text(p.total_distance); });
  row("Transport cost (VND)", [](const PolicyOutcome& p) { return with_thousands(p.transport_cost); });
  row("Financial cost (VND)", [](const PolicyOutcome& p) { return with_thousands(p.financial_cost); });
  row("Total cost (VND)", [](const PolicyOutcome& p) { return with_thousands(p.total_cost); });
  out << pad("Cost improvement (%)", label_w) << pad("", col_w);
  if (report.improvement_percent) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *report.improvement_percent);
    out << buf;
  } else {
    out << "-";
  }
  out << "\n";
  return out.str();
}

ComparisonReport parse_report(std::string_view structured) {
  const json doc = detail::parse_document(structured);
  detail::check_schema_version(doc);
  ComparisonReport r;
  const json& seed = detail::require(doc, "seed", "");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    throw InputError("seed", "expected a nonnegative integer");
  }
  r.seed = seed.get<std::uint64_t>();
  const json& complete = detail::require(doc, "complete", "");
  if (!complete.is_boolean()) {
    throw InputError("complete", "expected a boolean");
  }
  r.complete = complete.get<bool>();
  r.failing_policy = detail::as_id(detail::require(doc, "failing_policy", ""), "failing_policy");
  if (const json* imp = detail::optional_field(doc, "improvement_percent")) {
    r.improvement_percent = detail::as_number(*imp, "improvement_percent");
  }
  const json& policies = detail::require(doc, "policies", "");
  const char* keys[] = {"no_split", "split"};
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string path = detail::join_path("policies", keys[i]);
    const json& p = detail::require(policies, keys[i], "policies");
    PolicyOutcome& o = r.policies[i];
    o.mode = i == 0 ? SplitMode::no_split : SplitMode::split;
    o.status = parse_status(detail::as_id(detail::require(p, "status", path), path + ".status"), path + ".status");
    o.trips = static_cast<int>(detail::as_integer(detail::require(p, "trips", path), path + ".trips"));
    o.total_distance = detail::as_integer(detail::require(p, "total_distance_m", path), path + ".total_distance_m");
    o.transport_cost = detail::as_integer(detail::require(p, "transport_cost", path), path + ".transport_cost");
    o.financial_cost = detail::as_integer(detail::require(p, "financial_cost", path), path + ".financial_cost");
    o.total_cost = detail::as_integer(detail::require(p, "total_cost", path), path + ".total_cost");
    if (o.total_cost != o.transport_cost + o.financial_cost) {
      throw InputError(path + ".total_cost", "total is not transport + financial");
    }
  }
  return r;
}

} // namespace atmroute
