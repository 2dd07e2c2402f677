#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "atmroute/report.hpp"
#include "builders.hpp"

using namespace atmtest;

namespace {

SolveResult outcome(SolveStatus status, int trips, Meters m, Money transport, Money financial) {
  SolveResult r;
  r.status = status;
  r.cost.trips = trips;
  r.cost.total_distance = m;
  r.cost.transport = transport;
  r.cost.financial = financial;
  return r;
}

// magnitudes of a default scenario
ComparisonReport table_two() {
  return make_report(outcome(SolveStatus::feasible, 5, 326'800, 5'707'054, 36'317'446),
                     outcome(SolveStatus::feasible, 8, 621'900, 10'913'000, 20'000'000), 42);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    out.push_back(l);
  }
  return out;
}

} // namespace

TEST(WithThousands, Groups) {
  EXPECT_EQ(with_thousands(84'412'000'000), "84,412,000,000");
  EXPECT_EQ(with_thousands(1'167'500), "1,167,500");
  EXPECT_EQ(with_thousands(999), "999");
  EXPECT_EQ(with_thousands(0), "0");
  EXPECT_EQ(with_thousands(-1234), "-1,234");
}

TEST(MakeReport, TotalsAndImprovement) {
  const auto r = table_two();
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.no_split().total_cost, 42'024'500);
  EXPECT_EQ(r.split().total_cost, 30'913'000);
  ASSERT_TRUE(r.improvement_percent);
  EXPECT_DOUBLE_EQ(*r.improvement_percent, 100.0 * (42'024'500.0 - 30'913'000.0) / 42'024'500.0);
}

TEST(MakeReport, IncompleteNamesPolicy) {
  const auto r = make_report(outcome(SolveStatus::feasible, 5, 1000, 10, 20),
                             outcome(SolveStatus::infeasible, 0, 0, 0, 0), 1);
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.failing_policy, "split");
  EXPECT_FALSE(r.improvement_percent);
  const auto both = make_report(outcome(SolveStatus::timeout, 0, 0, 0, 0),
                                outcome(SolveStatus::infeasible, 0, 0, 0, 0), 1);
  EXPECT_EQ(both.failing_policy, "no-split,split");
}

TEST(RenderReport, TableRows) {
  const auto text = render_report(table_two(), ReportFormat::table);
  const auto rows = lines(text);
  ASSERT_EQ(rows.size(), 8U); // header plus seven rows
  EXPECT_NE(rows[2].find("5"), std::string::npos);
  EXPECT_NE(rows[3].find("326.8"), std::string::npos);
  EXPECT_NE(rows[3].find("621.9"), std::string::npos);
  EXPECT_NE(rows[4].find("5,707,054"), std::string::npos);
  EXPECT_NE(rows[5].find("36,317,446"), std::string::npos);
  EXPECT_NE(rows[6].find("42,024,500"), std::string::npos);
  EXPECT_NE(rows[7].find("26.4"), std::string::npos);
}

TEST(RenderReport, IncompleteColumnMarked) {
  const auto r = make_report(outcome(SolveStatus::feasible, 5, 1000, 10, 20),
                             outcome(SolveStatus::infeasible, 0, 0, 0, 0), 1);
  const auto rows = lines(render_report(r, ReportFormat::table));
  EXPECT_NE(rows[2].find("infeasible"), std::string::npos);
  EXPECT_EQ(rows[7].back(), '-');
}

TEST(RenderReport, StructuredRoundTrip) {
  for (const auto& r : {table_two(), make_report(outcome(SolveStatus::feasible, 1, 2, 3, 4),
                                                 outcome(SolveStatus::timeout, 0, 0, 0, 0), 9)}) {
    const auto text = render_report(r, ReportFormat::structured);
    const auto back = parse_report(text);
    EXPECT_EQ(back.policies, r.policies);
    EXPECT_EQ(back.complete, r.complete);
    EXPECT_EQ(back.failing_policy, r.failing_policy);
    EXPECT_EQ(back.seed, r.seed);
    EXPECT_EQ(back.improvement_percent.has_value(), r.improvement_percent.has_value());
    EXPECT_EQ(render_report(back, ReportFormat::structured), text);
  }
}

TEST(RenderReport, StructuredUsesRawIntegers) {
  const auto doc = nlohmann::json::parse(render_report(table_two(), ReportFormat::structured));
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["policies"]["no_split"]["total_cost"], 42'024'500);
}

TEST(ParseReport, RejectsBrokenIdentity) {
  auto doc = nlohmann::json::parse(render_report(table_two(), ReportFormat::structured));
  doc["policies"]["split"]["total_cost"] = 1;
  EXPECT_THROW(parse_report(doc.dump()), InputError);
  doc = nlohmann::json::parse(render_report(table_two(), ReportFormat::structured));
  doc["policies"]["split"]["status"] = "great";
  EXPECT_THROW(parse_report(doc.dump()), InputError);
}

TEST(ParseMode, Names) {
  EXPECT_EQ(parse_mode("split"), SplitMode::split);
  EXPECT_EQ(parse_mode("no-split"), SplitMode::no_split);
  EXPECT_THROW(parse_mode("sometimes"), InputError);
}

TEST(ComparePolicies, SinglePeriodPoliciesCoincide) {
  ScenarioParams p;
  p.periods = 1;
  p.n_atms = 10;
  const Instance inst = generate_scenario(p);
  SolveConfig cfg;
  cfg.max_stale_restarts = 10;
  const auto c = compare_policies(inst, cfg);
  ASSERT_TRUE(c.report.complete);
  EXPECT_EQ(c.report.no_split().total_cost, c.report.split().total_cost);
  EXPECT_EQ(c.report.no_split().trips, c.report.split().trips);
  EXPECT_DOUBLE_EQ(*c.report.improvement_percent, 0.0);
}

TEST(ComparePolicies, NoInterestMeansNoGain) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ScenarioParams p;
    p.seed = seed;
    p.interest_rate = 0.0;
    const Instance inst = generate_scenario(p);
    SolveConfig cfg;
    cfg.seed = seed;
    cfg.max_stale_restarts = 10;
    const auto c = compare_policies(inst, cfg);
    ASSERT_TRUE(c.report.complete);
    EXPECT_EQ(c.report.split().financial_cost, 0);
    EXPECT_LE(*c.report.improvement_percent, 0.0) << seed;
  }
}

TEST(ComparePolicies, ReportMatchesPlans) {
  ScenarioParams p;
  p.seed = 5;
  const Instance inst = generate_scenario(p);
  SolveConfig cfg;
  cfg.max_stale_restarts = 10;
  const auto c = compare_policies(inst, cfg);
  const auto cost = aggregate_cost(inst, c.split.plan, cfg.weights);
  EXPECT_EQ(c.report.split().transport_cost, cost.transport);
  EXPECT_EQ(c.report.split().financial_cost, cost.financial);
  EXPECT_EQ(c.report.split().trips, cost.trips);
  EXPECT_EQ(c.report.seed, cfg.seed);
}
