#include "atmroute/splitting.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "json_util.hpp"

namespace atmroute {

using detail::json;
using detail::ordered_json;

SplitPolicy make_policy(const Instance& inst, SplitMode mode) {
  SplitPolicy policy;
  policy.mode = mode;
  if (inst.split_bounds) {
    policy.lower = inst.split_bounds->lower;
    policy.upper = inst.split_bounds->upper;
  } else if (mode == SplitMode::split) {
    throw std::invalid_argument("split policy needs split_bounds in the instance");
  } else {
    policy.upper = std::numeric_limits<Money>::max();
  }
  if (mode == SplitMode::split && (policy.lower <= 0 || policy.lower > policy.upper)) {
    throw std::invalid_argument("split bounds must satisfy 0 < lower <= upper");
  }
  return policy;
}

std::vector<Money> near_equal_parts(Money total, int k) {
  std::vector<Money> parts(static_cast<std::size_t>(k), total / k);
  const Money rest = total % k;
  for (Money i = 0; i < rest; ++i) {
    ++parts[static_cast<std::size_t>(i)];
  }
  return parts;
}

std::vector<SplitOption> enumerate_splits(Money total, const SplitPolicy& policy) {
  if (total <= 0) {
    throw std::invalid_argument("total must be positive");
  }
  if (policy.mode == SplitMode::no_split) {
    return {SplitOption{1, {total}}};
  }
  if (policy.lower <= 0 || policy.lower > policy.upper) {
    throw std::invalid_argument("split bounds must satisfy 0 < lower <= upper");
  }
  const Money k_min = (total + policy.upper - 1) / policy.upper;
  const Money k_max = total / policy.lower;
  std::vector<SplitOption> options;
  for (Money k = std::max<Money>(k_min, 1); k <= k_max; ++k) {
    options.push_back({static_cast<int>(k), near_equal_parts(total, static_cast<int>(k))});
  }
  return options;
}

Money balance_days(const Atm& atm, const std::vector<Money>& deposits) {
  Money balance = atm.initial_balance;
  Money sum = 0;
  for (std::size_t t = 0; t < atm.forecast_withdrawals.size(); ++t) {
    balance += (t < deposits.size() ? deposits[t] : 0) - atm.forecast_withdrawals[t];
    sum += balance;
  }
  return sum;
}

namespace {

// Exact latest placement of a multiset of amounts. The state is how many of
// each distinct amount have been placed so far, in mixed radix.
class Placement {
public:
  Placement(const Atm& atm, int periods, const std::vector<Money>& amounts) : periods_(periods) {
    std::map<Money, int> counts;
    for (Money a : amounts) {
      ++counts[a];
    }
    for (const auto& [value, count] : counts) {
      values_.push_back(value);
      counts_.push_back(count);
    }
    radix_.resize(values_.size());
    states_ = 1;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      radix_[i] = states_;
      states_ *= counts_[i] + 1;
    }
    Money cumulative = 0;
    for (int t = 0; t < periods; ++t) {
      cumulative += atm.forecast_withdrawals[static_cast<std::size_t>(t)];
      need_.push_back(std::max<Money>(0, cumulative - atm.initial_balance));
    }
  }

  long long states() const {
    return states_;
  }

  std::vector<Money> solve() {
    const auto unset = std::numeric_limits<Money>::min();
    best_.assign(static_cast<std::size_t>(states_ * periods_), unset);
    choice_.assign(static_cast<std::size_t>(states_ * periods_), -1);
    std::vector<Money> deposits(static_cast<std::size_t>(periods_), 0);
    if (value(0, 0) == infeasible) {
      return {};
    }
    long long state = 0;
    for (int t = 0; t < periods_; ++t) {
      const long long x = choice_[idx(t, state)];
      deposits[static_cast<std::size_t>(t)] = amount_of(x);
      state += x;
    }
    return deposits;
  }

private:
  static constexpr Money infeasible = std::numeric_limits<Money>::min() + 1;

  std::size_t idx(int t, long long state) const {
    return static_cast<std::size_t>(state * periods_ + t);
  }

  int digit(long long state, std::size_t i) const {
    return static_cast<int>(state / radix_[i] % (counts_[i] + 1));
  }

  Money amount_of(long long delta) const {
    Money sum = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      sum += values_[i] * digit(delta, i);
    }
    return sum;
  }

  // Largest sum of amount * period achievable from period t on, given the
  // placed state; `infeasible` when the cumulative need cannot be met.
  Money value(int t, long long placed) {
    if (t == periods_) {
      return placed == states_ - 1 ? 0 : infeasible;
    }
    Money& memo = best_[idx(t, placed)];
    if (memo != std::numeric_limits<Money>::min()) {
      return memo;
    }
    const Money placed_amount = amount_of(placed);
    Money best = infeasible;
    long long best_x = -1;
    // Enumerate every sub-multiset x of the remaining amounts.
    std::vector<int> x(values_.size(), 0);
    while (true) {
      long long delta = 0;
      Money added = 0;
      for (std::size_t i = 0; i < values_.size(); ++i) {
        delta += x[i] * radix_[i];
        added += values_[i] * x[i];
      }
      if (placed_amount + added >= need_[static_cast<std::size_t>(t)]) {
        const Money rest = value(t + 1, placed + delta);
        if (rest != infeasible) {
          const Money v = rest + added * t;
          if (best == infeasible || v > best) {
            best = v;
            best_x = delta;
          }
        }
      }
      std::size_t i = 0;
      for (; i < values_.size(); ++i) {
        if (x[i] < counts_[i] - digit(placed, i)) {
          ++x[i];
          break;
        }
        x[i] = 0;
      }
      if (i == values_.size()) {
        break;
      }
    }
    memo = best;
    choice_[idx(t, placed)] = best_x;
    return best;
  }

  int periods_;
  std::vector<Money> values_;
  std::vector<int> counts_;
  std::vector<long long> radix_;
  long long states_ = 1;
  std::vector<Money> need_;
  std::vector<Money> best_;
  std::vector<long long> choice_;
};

// Forward greedy used only when the exact state space is too large.
std::vector<Money> greedy_placement(const Atm& atm, int periods, std::vector<Money> amounts) {
  std::sort(amounts.begin(), amounts.end(), std::greater<>());
  std::vector<Money> deposits(static_cast<std::size_t>(periods), 0);
  Money balance = atm.initial_balance;
  std::size_t next = 0;
  for (int t = 0; t < periods; ++t) {
    balance -= atm.forecast_withdrawals[static_cast<std::size_t>(t)];
    while (balance < 0 && next < amounts.size()) {
      deposits[static_cast<std::size_t>(t)] += amounts[next];
      balance += amounts[next++];
    }
  }
  for (; next < amounts.size(); ++next) {
    deposits.back() += amounts[next];
  }
  return deposits;
}

constexpr long long max_exact_states = 1LL << 14;

} // namespace

DepositSchedule schedule_deposits(const Instance& inst, const Atm& atm, const std::vector<Money>& amounts) {
  const int p = inst.periods;
  DepositSchedule out;
  out.deposits.assign(static_cast<std::size_t>(p), 0);
  if (amounts.empty()) {
    out.feasible = balance_days(atm, out.deposits) >= 0;
    Money balance = atm.initial_balance;
    for (int t = 0; t < p; ++t) {
      balance -= atm.forecast_withdrawals[static_cast<std::size_t>(t)];
      out.feasible = out.feasible && balance >= 0;
    }
    return out;
  }

  Money total = 0;
  for (Money a : amounts) {
    total += a;
  }
  Money withdrawn = 0;
  for (Money m : atm.forecast_withdrawals) {
    withdrawn += m;
  }
  if (atm.initial_balance + total < withdrawn) {
    // No placement covers the horizon: everything as early as possible.
    out.deposits[0] = total;
    out.feasible = false;
    return out;
  }

  Placement placement(atm, p, amounts);
  if (placement.states() <= max_exact_states) {
    out.deposits = placement.solve();
  } else {
    out.deposits = greedy_placement(atm, p, amounts);
  }
  return out;
}

Money SplitSchedule::deposit(AtmIndex a, Period t) const {
  const auto& s = atms[static_cast<std::size_t>(a)];
  if (s.excluded()) {
    return 0;
  }
  return s.options[static_cast<std::size_t>(s.chosen)].deposits[static_cast<std::size_t>(t)];
}

std::vector<Money> SplitSchedule::deposits(AtmIndex a) const {
  std::vector<Money> d(static_cast<std::size_t>(periods), 0);
  for (Period t = 0; t < periods; ++t) {
    d[static_cast<std::size_t>(t)] = deposit(a, t);
  }
  return d;
}

SplitSchedule build_split_schedule(const Instance& inst, const SplitPolicy& policy) {
  SplitSchedule schedule;
  schedule.policy = policy;
  schedule.periods = inst.periods;
  schedule.atms.resize(inst.atms.size());
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    const auto& atm = inst.atms[static_cast<std::size_t>(a)];
    auto& entry = schedule.atms[static_cast<std::size_t>(a)];
    if (atm.total_demand <= 0) {
      continue;
    }
    auto options = enumerate_splits(atm.total_demand, policy);
    if (options.empty()) {
      schedule.warnings.push_back(
        {detail::index_path("atms", static_cast<std::size_t>(a)),
         "no deposit count fits the split bounds for ATM " + atm.id + "; using a single deposit"});
      options.push_back({1, {atm.total_demand}});
    }
    for (auto& option : options) {
      ScheduledOption scheduled;
      const auto placed = schedule_deposits(inst, atm, option.amounts);
      scheduled.split = std::move(option);
      scheduled.deposits = placed.deposits;
      scheduled.feasible = placed.feasible;
      scheduled.balance_days = balance_days(atm, placed.deposits);
      entry.options.push_back(std::move(scheduled));
    }
    const bool any_feasible = std::any_of(entry.options.begin(), entry.options.end(),
                                          [](const ScheduledOption& o) { return o.feasible; });
    for (std::size_t i = 0; i < entry.options.size(); ++i) {
      const auto& o = entry.options[i];
      if (any_feasible && !o.feasible) {
        continue;
      }
      if (entry.chosen < 0 ||
          o.balance_days < entry.options[static_cast<std::size_t>(entry.chosen)].balance_days) {
        entry.chosen = static_cast<int>(i);
      }
    }
  }
  return schedule;
}

std::string serialize_schedule(const Instance& inst, const SplitSchedule& schedule) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["policy"] = {{"mode", schedule.policy.mode == SplitMode::split ? "split" : "no-split"},
                   {"lower", schedule.policy.lower},
                   {"upper", schedule.policy.upper}};
  doc["periods"] = schedule.periods;
  ordered_json atms = ordered_json::object();
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    const auto& entry = schedule.atms[static_cast<std::size_t>(a)];
    ordered_json obj;
    obj["chosen_parts"] =
      entry.excluded() ? 0 : entry.options[static_cast<std::size_t>(entry.chosen)].split.parts;
    obj["deposits"] = schedule.deposits(a);
    ordered_json options = ordered_json::array();
    for (const auto& o : entry.options) {
      options.push_back({{"parts", o.split.parts},
                         {"amounts", o.split.amounts},
                         {"deposits", o.deposits},
                         {"feasible", o.feasible},
                         {"balance_days", o.balance_days}});
    }
    obj["options"] = std::move(options);
    atms[inst.atms[static_cast<std::size_t>(a)].id] = std::move(obj);
  }
  doc["atms"] = std::move(atms);
  ordered_json warnings = ordered_json::array();
  for (const auto& w : schedule.warnings) {
    warnings.push_back({{"path", w.path}, {"message", w.message}});
  }
  doc["warnings"] = std::move(warnings);
  return doc.dump(1) + "\n";
}

SplitSchedule parse_schedule(const Instance& inst, std::string_view text) {
  const json doc = detail::parse_document(text);
  detail::check_schema_version(doc);
  SplitSchedule schedule;
  const json& policy = detail::require(doc, "policy", "");
  const auto mode = detail::as_id(detail::require(policy, "mode", "policy"), "policy.mode");
  if (mode != "split" && mode != "no-split") {
    throw InputError("policy.mode", "expected split or no-split");
  }
  schedule.policy.mode = mode == "split" ? SplitMode::split : SplitMode::no_split;
  schedule.policy.lower = detail::as_integer(detail::require(policy, "lower", "policy"), "policy.lower");
  schedule.policy.upper = detail::as_integer(detail::require(policy, "upper", "policy"), "policy.upper");
  schedule.periods = static_cast<int>(detail::as_integer(detail::require(doc, "periods", ""), "periods"));
  if (schedule.periods != inst.periods) {
    throw InputError("periods", "schedule periods differ from the instance");
  }
  schedule.atms.resize(inst.atms.size());
  const json& atms = detail::require(doc, "atms", "");
  for (const auto& [aid, obj] : atms.items()) {
    const auto apath = detail::join_path("atms", aid);
    auto n = inst.find_node(aid);
    if (!n || !inst.is_atm(*n)) {
      throw InputError(apath, "unknown ATM " + aid);
    }
    auto& entry = schedule.atms[static_cast<std::size_t>(inst.atm_of(*n))];
    const int chosen_parts =
      static_cast<int>(detail::as_integer(detail::require(obj, "chosen_parts", apath), apath + ".chosen_parts"));
    const auto& options = detail::as_array(detail::require(obj, "options", apath), apath + ".options");
    for (std::size_t i = 0; i < options.size(); ++i) {
      const auto opath = detail::index_path(apath + ".options", i);
      const auto& o = options[i];
      ScheduledOption so;
      so.split.parts = static_cast<int>(detail::as_integer(detail::require(o, "parts", opath), opath + ".parts"));
      for (const auto& v : detail::as_array(detail::require(o, "amounts", opath), opath + ".amounts")) {
        so.split.amounts.push_back(detail::as_integer(v, opath + ".amounts"));
      }
      const auto& deps = detail::as_array(detail::require(o, "deposits", opath), opath + ".deposits",
                                          static_cast<std::size_t>(inst.periods));
      for (const auto& v : deps) {
        so.deposits.push_back(detail::as_integer(v, opath + ".deposits"));
      }
      so.feasible = detail::require(o, "feasible", opath).get<bool>();
      so.balance_days =
        detail::as_integer(detail::require(o, "balance_days", opath), opath + ".balance_days");
      if (so.split.parts == chosen_parts && entry.chosen < 0) {
        entry.chosen = static_cast<int>(i);
      }
      entry.options.push_back(std::move(so));
    }
    if (!entry.options.empty() && entry.chosen < 0) {
      throw InputError(apath + ".chosen_parts", "no option with the chosen number of parts");
    }
  }
  if (const json* warnings = detail::optional_field(doc, "warnings")) {
    for (const auto& w : *warnings) {
      schedule.warnings.push_back({w.value("path", ""), w.value("message", "")});
    }
  }
  return schedule;
}

} // namespace atmroute
