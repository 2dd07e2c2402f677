// atmroute: cash replenishment planning from the command line.
//
// Exit codes: 0 success, 1 infeasible result or plan violations, 2 bad input.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atmroute/feasibility.hpp"
#include "atmroute/report.hpp"
#include "atmroute/scenario.hpp"
#include "atmroute/solver.hpp"

namespace fs = std::filesystem;
using namespace atmroute;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_infeasible = 1;
constexpr int exit_input = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
  double time_limit = 10.0;
  std::string output_dir;
};

std::string resolve(const Globals& g, const std::string& path) {
  if (g.output_dir.empty() || fs::path(path).is_absolute()) {
    return path;
  }
  fs::create_directories(g.output_dir);
  return (fs::path(g.output_dir) / path).string();
}

Weights parse_weights(const std::string& text) {
  double w1 = 0;
  double w2 = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> w1 >> comma >> w2) || comma != ',' || !(in >> std::ws).eof()) {
    throw InputError("--weights", "expected w1,w2 but got '" + text + "'");
  }
  return {w1, w2};
}

std::vector<Weights> parse_weight_list(const std::string& text) {
  std::vector<Weights> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (!item.empty()) {
      out.push_back(parse_weights(item));
    }
  }
  return out;
}

std::string breakdown_table(const SolveResult& r, Weights w) {
  std::ostringstream out;
  char km[32];
  std::snprintf(km, sizeof km, "%.1f", r.cost.total_km());
  char agg[64];
  std::snprintf(agg, sizeof agg, "%.0f", r.cost.aggregate);
  auto line = [&](const char* label, const std::string& value) {
    out << label << std::string(26 - std::string(label).size(), ' ') << value << "\n";
  };
  line("Status", status_name(r.status));
  line("Total trips", std::to_string(r.cost.trips));
  line("Total distance (km)", km);
  line("Transport cost (VND)", with_thousands(r.cost.transport));
  line("Financial cost (VND)", with_thousands(r.cost.financial));
  line("Total cost (VND)", with_thousands(r.cost.transport + r.cost.financial));
  std::ostringstream ws;
  ws << "Weighted (" << w.transport << "," << w.financial << ")";
  const std::string wl = ws.str();
  out << wl << std::string(wl.size() < 26 ? 26 - wl.size() : 1, ' ') << agg << "\n";
  return out.str();
}

SolveConfig make_config(const Globals& g, const std::string& weights) {
  SolveConfig cfg;
  cfg.weights = parse_weights(weights);
  cfg.time_limit = g.time_limit;
  cfg.seed = g.seed.value_or(1);
  validate_config(cfg);
  return cfg;
}

SplitSchedule schedule_for(const Instance& inst, const std::string& policy, const std::string& schedule_file) {
  if (!schedule_file.empty()) {
    return parse_schedule(inst, load_text(schedule_file));
  }
  return build_split_schedule(inst, make_policy(inst, parse_mode(policy)));
}

bool is_success(SolveStatus s) {
  return s == SolveStatus::feasible || s == SolveStatus::optimal;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ATM cash replenishment planner"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--time-limit", g.time_limit, "Solver time cap in seconds");
  app.add_option("--output-dir", g.output_dir, "Directory for relative output paths");
  app.fallthrough();

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a synthetic instance");
  std::string params_file, gen_output, distance_file;
  generate->add_option("--params", params_file, "Scenario parameter file (JSON)");
  generate->add_option("--output", gen_output, "Instance file to write")->required();
  generate->add_option("--distance-file", distance_file, "CSV distance matrix (km) replacing synthetic distances");

  // split
  auto* split = app.add_subcommand("split", "Build the deposit schedule");
  std::string split_instance, split_policy = "split", split_output;
  split->add_option("--instance", split_instance)->required();
  split->add_option("--policy", split_policy, "split or no-split");
  split->add_option("--output", split_output, "Schedule file to write (default: stdout)");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Plan routes and deposits");
  std::string solve_instance, solve_policy = "split", solve_weights = "1,1", solve_output, solve_schedule;
  bool solve_exact_flag = false;
  solve_cmd->add_option("--instance", solve_instance)->required();
  solve_cmd->add_option("--policy", solve_policy, "split or no-split");
  solve_cmd->add_option("--schedule", solve_schedule, "Use a schedule file instead of --policy");
  solve_cmd->add_option("--weights", solve_weights, "w1,w2");
  solve_cmd->add_option("--output", solve_output, "Plan file to write");
  solve_cmd->add_flag("--exact", solve_exact_flag, "Exhaustive search (tiny instances only)");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a plan against every constraint");
  std::string val_instance, val_plan;
  validate->add_option("--instance", val_instance)->required();
  validate->add_option("--plan", val_plan)->required();

  // compare
  auto* compare = app.add_subcommand("compare", "Split versus no-split comparison");
  std::string cmp_instance, cmp_weights = "1,1", cmp_format = "table";
  compare->add_option("--instance", cmp_instance)->required();
  compare->add_option("--weights", cmp_weights, "w1,w2");
  compare->add_option("--format", cmp_format, "table or structured")->check(CLI::IsMember({"table", "structured"}));

  // report
  auto* report = app.add_subcommand("report", "Render a stored comparison report");
  std::string rep_input, rep_format = "table";
  report->add_option("--input", rep_input)->required();
  report->add_option("--format", rep_format, "table or structured")->check(CLI::IsMember({"table", "structured"}));

  // pareto
  auto* pareto = app.add_subcommand("pareto", "Weighted-sum sweep of transport versus financial cost");
  std::string par_instance, par_policy = "split",
                            par_weights = "1,0;0.75,0.25;0.5,0.5;0.25,0.75;0,1";
  pareto->add_option("--instance", par_instance)->required();
  pareto->add_option("--policy", par_policy, "split or no-split");
  pareto->add_option("--weights", par_weights, "Semicolon-separated w1,w2 pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    if (*generate) {
      ScenarioParams params;
      if (!params_file.empty()) {
        params = parse_scenario_params(load_text(params_file));
      }
      if (g.seed) {
        params.seed = *g.seed;
      }
      Instance inst = generate_scenario(params);
      if (!distance_file.empty()) {
        apply_distance_matrix(inst, ingest_distance_matrix(load_text(distance_file), node_order(inst)));
      }
      save_text(resolve(g, gen_output), serialize_instance(inst));
      return exit_ok;
    }

    if (*split) {
      const Instance inst = load_instance(split_instance);
      const SplitSchedule s = build_split_schedule(inst, make_policy(inst, parse_mode(split_policy)));
      for (const auto& w : s.warnings) {
        std::cerr << "warning: " << w.path << ": " << w.message << "\n";
      }
      const std::string text = serialize_schedule(inst, s);
      if (split_output.empty()) {
        std::cout << text;
      } else {
        save_text(resolve(g, split_output), text);
      }
      return exit_ok;
    }

    if (*solve_cmd) {
      const Instance inst = load_instance(solve_instance);
      const SolveConfig cfg = make_config(g, solve_weights);
      const SplitSchedule schedule = schedule_for(inst, solve_policy, solve_schedule);
      SolveResult r;
      if (solve_exact_flag) {
        ExactLimits limits;
        limits.time_limit = cfg.time_limit;
        limits.weights = cfg.weights;
        r = solve_exact(inst, schedule, limits);
      } else {
        r = solve(inst, schedule, cfg);
      }
      if (!solve_output.empty()) {
        save_text(resolve(g, solve_output), serialize_plan(inst, r.plan));
      }
      std::cout << breakdown_table(r, cfg.weights);
      return is_success(r.status) ? exit_ok : exit_infeasible;
    }

    if (*validate) {
      const Instance inst = load_instance(val_instance);
      const Plan plan = parse_plan(inst, load_text(val_plan));
      const auto violations = check_plan(inst, plan);
      for (const auto& v : violations) {
        std::cout << format_violation(inst, v) << "\n";
      }
      return violations.empty() ? exit_ok : exit_infeasible;
    }

    if (*compare) {
      const Instance inst = load_instance(cmp_instance);
      const SolveConfig cfg = make_config(g, cmp_weights);
      const Comparison c = compare_policies(inst, cfg);
      save_text(resolve(g, "no_split_plan.json"), serialize_plan(inst, c.no_split.plan));
      save_text(resolve(g, "split_plan.json"), serialize_plan(inst, c.split.plan));
      save_text(resolve(g, "report.json"), render_report(c.report, ReportFormat::structured));
      std::cout << render_report(c.report, cmp_format == "table" ? ReportFormat::table : ReportFormat::structured);
      return c.report.complete ? exit_ok : exit_infeasible;
    }

    if (*report) {
      const ComparisonReport r = parse_report(load_text(rep_input));
      std::cout << render_report(r, rep_format == "table" ? ReportFormat::table : ReportFormat::structured);
      return exit_ok;
    }

    if (*pareto) {
      const Instance inst = load_instance(par_instance);
      SolveConfig cfg = make_config(g, "1,1");
      const SplitSchedule schedule = build_split_schedule(inst, make_policy(inst, parse_mode(par_policy)));
      const auto front = pareto_sweep(inst, schedule, parse_weight_list(par_weights), cfg);
      std::cout << "w1,w2,transport_cost,financial_cost,trips,total_km\n";
      for (const auto& pt : front) {
        char km[32];
        std::snprintf(km, sizeof km, "%.1f", pt.result.cost.total_km());
        std::cout << pt.weights.transport << "," << pt.weights.financial << "," << pt.result.cost.transport << ","
                  << pt.result.cost.financial << "," << pt.result.cost.trips << "," << km << "\n";
      }
      return front.empty() ? exit_infeasible : exit_ok;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
