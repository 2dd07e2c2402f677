#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "atmroute/solver.hpp"

namespace atmroute {

struct PolicyOutcome {
  SplitMode mode = SplitMode::no_split;
  SolveStatus status = SolveStatus::infeasible;
  int trips = 0;
  Meters total_distance = 0;
  Money transport_cost = 0;
  Money financial_cost = 0;
  Money total_cost = 0; // transport + financial

  bool feasible() const noexcept {
    return status == SolveStatus::optimal || status == SolveStatus::feasible;
  }
  bool operator==(const PolicyOutcome&) const = default;
};

// Split versus no-split comparison, laid out like the bank's cost table.
struct ComparisonReport {
  std::array<PolicyOutcome, 2> policies{}; // [0] no split, [1] split
  std::optional<double> improvement_percent; // 100 (no_split - split) / no_split
  bool complete = false;
  std::string failing_policy; // set when incomplete
  std::uint64_t seed = 0;

  const PolicyOutcome& no_split() const {
    return policies[0];
  }
  const PolicyOutcome& split() const {
    return policies[1];
  }
  bool operator==(const ComparisonReport&) const = default;
};

struct Comparison {
  ComparisonReport report;
  SolveResult no_split;
  SolveResult split;
};

PolicyOutcome summarize(SplitMode mode, const SolveResult& result);

// Runs the pipeline under both policies with the same seed and budget.
Comparison compare_policies(const Instance& inst, const SolveConfig& cfg);

ComparisonReport make_report(const SolveResult& no_split, const SolveResult& split,
                             std::uint64_t seed);

enum class ReportFormat { table, structured };

std::string render_report(const ComparisonReport& report, ReportFormat format);
ComparisonReport parse_report(std::string_view structured);

// 84412000000 -> "84,412,000,000"
std::string with_thousands(long long value);

std::string mode_name(SplitMode mode);
SplitMode parse_mode(std::string_view name);

} // namespace atmroute
