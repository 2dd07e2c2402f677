#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "atmroute/feasibility.hpp"
#include "atmroute/solver.hpp"
#include "rng.hpp"
#include "search_state.hpp"

namespace atmroute {

void validate_config(const SolveConfig& cfg) {
  if (!(cfg.time_limit > 0)) {
    throw std::invalid_argument("time_limit must be positive");
  }
  if (cfg.weights.transport < 0 || cfg.weights.financial < 0) {
    throw std::invalid_argument("weights must be nonnegative");
  }
  if (cfg.weights.transport == 0 && cfg.weights.financial == 0) {
    throw std::invalid_argument("weights must not both be zero");
  }
  if (cfg.penalty && !(*cfg.penalty > 0)) {
    throw std::invalid_argument("penalty must be positive");
  }
  if (cfg.max_stale_restarts < 0 || cfg.perturbation_strength < 0) {
    throw std::invalid_argument("restart settings must be nonnegative");
  }
}

std::string status_name(SolveStatus s) {
  switch (s) {
  case SolveStatus::optimal:
    return "optimal";
  case SolveStatus::feasible:
    return "feasible";
  case SolveStatus::infeasible:
    return "infeasible";
  case SolveStatus::timeout:
    return "timeout";
  }
  return "unknown";
}

bool dominates(const CostBreakdown& a, const CostBreakdown& b) {
  return a.transport <= b.transport && a.financial <= b.financial &&
         (a.transport < b.transport || a.financial < b.financial);
}

namespace detail {
namespace {

using Clock = std::chrono::steady_clock;
using Change = SearchState::Change;
using DepositOverride = std::pair<AtmIndex, std::vector<Money>>;

std::vector<AtmIndex> without(const std::vector<AtmIndex>& s, std::size_t i) {
  std::vector<AtmIndex> out = s;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

std::vector<AtmIndex> inserted(const std::vector<AtmIndex>& s, std::size_t pos, AtmIndex a) {
  std::vector<AtmIndex> out = s;
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), a);
  return out;
}

class LocalSearch {
public:
  LocalSearch(const SolveConfig& cfg, const SplitSchedule* options, Clock::time_point deadline)
    : cfg_(cfg), options_(options), deadline_(deadline),
      w_transport_(effective_weights(cfg.weights).transport) {
  }

  bool timed_out() const noexcept {
    return timed_out_;
  }
  std::int64_t moves() const noexcept {
    return moves_;
  }

  // First-improvement descent until no enabled neighborhood improves.
  void descend(SearchState& st, double penalty) {
    penalty_ = penalty;
    while (!timed_out_) {
      const bool moved = (cfg_.uses(Neighborhood::relocate) && relocate(st)) ||
                         (cfg_.uses(Neighborhood::swap) && swap(st)) ||
                         (cfg_.uses(Neighborhood::two_opt) && two_opt(st)) ||
                         (cfg_.uses(Neighborhood::period_move) && period_move(st)) ||
                         (cfg_.uses(Neighborhood::split_k_change) && options_ != nullptr && split_change(st));
      if (!moved) {
        break;
      }
    }
  }

  // Random relocations applied regardless of cost.
  void perturb(SearchState& st, Rng& rng, int strength) {
    const Instance& inst = st.instance();
    for (int k = 0; k < strength; ++k) {
      std::vector<std::pair<AtmIndex, Period>> served;
      for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
        for (Period t = 0; t < inst.periods; ++t) {
          if (st.server(a, t) >= 0 && !st.fleet(st.depot_of(a)).empty()) {
            served.emplace_back(a, t);
          }
        }
      }
      if (served.empty()) {
        return;
      }
      const auto [a, t] = served[rng.below(served.size())];
      const VehicleIndex h1 = st.server(a, t);
      const auto& fleet = st.fleet(st.depot_of(a));
      const VehicleIndex h2 = fleet[rng.below(fleet.size())];
      const auto& s1 = st.seq(h1, t);
      const auto i = static_cast<std::size_t>(std::find(s1.begin(), s1.end(), a) - s1.begin());
      auto rest = without(s1, i);
      if (h1 == h2) {
        const auto pos = rng.below(rest.size() + 1);
        st.apply({{{st.slot(h1, t), inserted(rest, pos, a)}}, std::nullopt});
      } else {
        const auto& s2 = st.seq(h2, t);
        const auto pos = rng.below(s2.size() + 1);
        st.apply({{{st.slot(h1, t), std::move(rest)}, {st.slot(h2, t), inserted(s2, pos, a)}}, std::nullopt});
      }
    }
  }

  // Cheapest penalized position for ATM a at period t among its depot's fleet.
  std::optional<std::pair<VehicleIndex, std::vector<AtmIndex>>>
  best_insertion(const SearchState& st, AtmIndex a, Period t, const DepositOverride* ov) const {
    std::optional<std::pair<VehicleIndex, std::vector<AtmIndex>>> best;
    double best_score = 0;
    for (VehicleIndex h : st.fleet(st.depot_of(a))) {
      const auto& s = st.seq(h, t);
      const RouteEval& old = st.route_eval(st.slot(h, t));
      for (std::size_t pos = 0; pos <= s.size(); ++pos) {
        auto cand = inserted(s, pos, a);
        const RouteEval ev = st.evaluate(h, t, cand, ov);
        const double score = w_transport_ * static_cast<double>(ev.cost - old.cost) +
                             penalty_ * static_cast<double>(ev.violation - old.violation);
        if (!best || score < best_score) {
          best_score = score;
          best.emplace(h, std::move(cand));
        }
      }
    }
    return best;
  }

  void set_penalty(double penalty) {
    penalty_ = penalty;
  }

private:
  bool tick() {
    if ((++evaluations_ & 63) == 0 && Clock::now() >= deadline_) {
      timed_out_ = true;
    }
    return timed_out_;
  }

  // Applies the change when it lowers the penalized objective.
  bool attempt(SearchState& st, Change&& c) {
    if (st.objective_after(c, penalty_) < st.objective(penalty_)) {
      st.apply(c);
      ++moves_;
      return true;
    }
    return false;
  }

  bool relocate(SearchState& st) {
    const Instance& inst = st.instance();
    for (Period t = 0; t < inst.periods; ++t) {
      for (VehicleIndex h1 = 0; h1 < inst.vehicle_count(); ++h1) {
        const auto s1 = st.seq(h1, t);
        for (std::size_t i = 0; i < s1.size(); ++i) {
          const AtmIndex a = s1[i];
          const auto rest = without(s1, i);
          for (VehicleIndex h2 : st.fleet(st.depot_of(a))) {
            if (h2 == h1) {
              for (std::size_t j = 0; j <= rest.size(); ++j) {
                if (j == i) {
                  continue;
                }
                if (tick() || attempt(st, {{{st.slot(h1, t), inserted(rest, j, a)}}, std::nullopt})) {
                  return !timed_out_;
                }
              }
              continue;
            }
            const auto& s2 = st.seq(h2, t);
            for (std::size_t j = 0; j <= s2.size(); ++j) {
              if (tick() ||
                  attempt(st, {{{st.slot(h1, t), rest}, {st.slot(h2, t), inserted(s2, j, a)}}, std::nullopt})) {
                return !timed_out_;
              }
            }
          }
        }
      }
    }
    return false;
  }

  bool swap(SearchState& st) {
    const Instance& inst = st.instance();
    auto home = [&](VehicleIndex h) { return inst.vehicles[static_cast<std::size_t>(h)].home_depot; };
    for (Period t = 0; t < inst.periods; ++t) {
      for (VehicleIndex h1 = 0; h1 < inst.vehicle_count(); ++h1) {
        const auto s1 = st.seq(h1, t);
        for (std::size_t i = 0; i < s1.size(); ++i) {
          for (VehicleIndex h2 = h1; h2 < inst.vehicle_count(); ++h2) {
            const auto s2 = st.seq(h2, t);
            for (std::size_t j = h2 == h1 ? i + 1 : 0; j < s2.size(); ++j) {
              Change c;
              if (h1 == h2) {
                auto s = s1;
                std::swap(s[i], s[j]);
                c.routes.emplace_back(st.slot(h1, t), std::move(s));
              } else {
                if (home(h2) != st.depot_of(s1[i]) || home(h1) != st.depot_of(s2[j])) {
                  continue;
                }
                auto n1 = s1;
                auto n2 = s2;
                std::swap(n1[i], n2[j]);
                c.routes.emplace_back(st.slot(h1, t), std::move(n1));
                c.routes.emplace_back(st.slot(h2, t), std::move(n2));
              }
              if (tick() || attempt(st, std::move(c))) {
                return !timed_out_;
              }
            }
          }
        }
      }
    }
    return false;
  }

  bool two_opt(SearchState& st) {
    const Instance& inst = st.instance();
    for (Period t = 0; t < inst.periods; ++t) {
      for (VehicleIndex h = 0; h < inst.vehicle_count(); ++h) {
        const auto s = st.seq(h, t);
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
          for (std::size_t j = i + 1; j < s.size(); ++j) {
            auto n = s;
            std::reverse(n.begin() + static_cast<std::ptrdiff_t>(i), n.begin() + static_cast<std::ptrdiff_t>(j) + 1);
            if (tick() || attempt(st, {{{st.slot(h, t), std::move(n)}}, std::nullopt})) {
              return !timed_out_;
            }
          }
        }
      }
      // Tail exchange between two routes of the same depot.
      for (VehicleIndex h1 = 0; h1 < inst.vehicle_count(); ++h1) {
        for (VehicleIndex h2 = h1 + 1; h2 < inst.vehicle_count(); ++h2) {
          if (inst.vehicles[static_cast<std::size_t>(h1)].home_depot !=
              inst.vehicles[static_cast<std::size_t>(h2)].home_depot) {
            continue;
          }
          const auto s1 = st.seq(h1, t);
          const auto s2 = st.seq(h2, t);
          for (std::size_t i = 0; i <= s1.size(); ++i) {
            for (std::size_t j = 0; j <= s2.size(); ++j) {
              if ((i == s1.size() && j == s2.size()) || (i == 0 && j == 0)) {
                continue;
              }
              std::vector<AtmIndex> n1(s1.begin(), s1.begin() + static_cast<std::ptrdiff_t>(i));
              n1.insert(n1.end(), s2.begin() + static_cast<std::ptrdiff_t>(j), s2.end());
              std::vector<AtmIndex> n2(s2.begin(), s2.begin() + static_cast<std::ptrdiff_t>(j));
              n2.insert(n2.end(), s1.begin() + static_cast<std::ptrdiff_t>(i), s1.end());
              if (tick() ||
                  attempt(st, {{{st.slot(h1, t), std::move(n1)}, {st.slot(h2, t), std::move(n2)}}, std::nullopt})) {
                return !timed_out_;
              }
            }
          }
        }
      }
    }
    return false;
  }

  // Moves one deposit to an adjacent period where the ATM is not served.
  bool period_move(SearchState& st) {
    const Instance& inst = st.instance();
    for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
      for (Period t = 0; t < inst.periods; ++t) {
        const VehicleIndex h = st.server(a, t);
        if (st.deposit(a, t) <= 0 || h < 0) {
          continue;
        }
        for (Period to : {t - 1, t + 1}) {
          if (to < 0 || to >= inst.periods || st.deposit(a, to) != 0 || st.server(a, to) >= 0) {
            continue;
          }
          auto d = st.deposits(a);
          d[static_cast<std::size_t>(to)] = d[static_cast<std::size_t>(t)];
          d[static_cast<std::size_t>(t)] = 0;
          const DepositOverride ov{a, std::move(d)};
          const auto& s = st.seq(h, t);
          auto rest = without(s, static_cast<std::size_t>(std::find(s.begin(), s.end(), a) - s.begin()));
          auto ins = best_insertion(st, a, to, &ov);
          if (!ins || tick()) {
            if (timed_out_) {
              return false;
            }
            continue;
          }
          if (attempt(st, {{{st.slot(h, t), std::move(rest)}, {st.slot(ins->first, to), std::move(ins->second)}}, ov})) {
            return true;
          }
        }
      }
    }
    return false;
  }

  // Replaces one ATM's deposits by an adjacent split option.
  bool split_change(SearchState& st) {
    const Instance& inst = st.instance();
    for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
      const auto& entry = options_->atms[static_cast<std::size_t>(a)];
      if (entry.excluded()) {
        continue;
      }
      const auto current = st.deposits(a);
      int idx = -1;
      for (std::size_t k = 0; k < entry.options.size(); ++k) {
        if (entry.options[k].deposits == current) {
          idx = static_cast<int>(k);
          break;
        }
      }
      std::vector<int> candidates;
      if (idx >= 0) {
        for (int k : {idx - 1, idx + 1}) {
          if (k >= 0 && k < static_cast<int>(entry.options.size())) {
            candidates.push_back(k);
          }
        }
      } else if (entry.chosen >= 0) {
        candidates.push_back(entry.chosen);
      }
      for (int k : candidates) {
        const DepositOverride ov{a, entry.options[static_cast<std::size_t>(k)].deposits};
        Change c;
        bool possible = true;
        for (Period t = 0; t < inst.periods && possible; ++t) {
          const Money next = ov.second[static_cast<std::size_t>(t)];
          const VehicleIndex h = st.server(a, t);
          if (h >= 0) {
            const auto& s = st.seq(h, t);
            if (next > 0) {
              c.routes.emplace_back(st.slot(h, t), s);
            } else {
              c.routes.emplace_back(st.slot(h, t),
                                    without(s, static_cast<std::size_t>(std::find(s.begin(), s.end(), a) - s.begin())));
            }
          } else if (next > 0) {
            auto ins = best_insertion(st, a, t, &ov);
            if (!ins) {
              possible = false;
              break;
            }
            c.routes.emplace_back(st.slot(ins->first, t), std::move(ins->second));
          }
        }
        if (!possible) {
          continue;
        }
        c.deposits = ov;
        if (tick()) {
          return false;
        }
        if (attempt(st, std::move(c))) {
          return true;
        }
      }
    }
    return false;
  }

  const SolveConfig& cfg_;
  const SplitSchedule* options_;
  Clock::time_point deadline_;
  double w_transport_;
  double penalty_ = 1.0;
  bool timed_out_ = false;
  std::int64_t moves_ = 0;
  std::int64_t evaluations_ = 0;
};

// Search state from an arbitrary plan: duplicate visits within a period and
// visits without a deposit are dropped, negative deposits read as zero, and
// deposits without a visit are inserted at their cheapest position.
SearchState state_from_plan(const Instance& inst, const Plan& plan, LocalSearch& ls, Weights weights) {
  if (plan.vehicle_count() != inst.vehicle_count() || plan.atm_count() != inst.atm_count() ||
      plan.periods() != inst.periods) {
    throw std::invalid_argument("plan dimensions do not match the instance");
  }
  SearchState st(inst, assign_depots(inst), weights);
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    for (Period t = 0; t < inst.periods; ++t) {
      st.set_deposit(a, t, std::max<Money>(0, plan.deposit(a, t)));
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(inst.atm_count() * inst.periods), false);
  for (VehicleIndex h = 0; h < inst.vehicle_count(); ++h) {
    for (Period t = 0; t < inst.periods; ++t) {
      std::vector<AtmIndex> s;
      for (NodeIndex n : plan.route(h, t).nodes) {
        if (!inst.is_atm(n)) {
          continue;
        }
        const AtmIndex a = inst.atm_of(n);
        const auto cell = static_cast<std::size_t>(a * inst.periods + t);
        if (!seen[cell] && st.deposit(a, t) > 0) {
          seen[cell] = true;
          s.push_back(a);
        }
      }
      st.set_seq(h, t, std::move(s));
    }
  }
  st.refresh();
  for (AtmIndex a = 0; a < inst.atm_count(); ++a) {
    for (Period t = 0; t < inst.periods; ++t) {
      if (st.deposit(a, t) > 0 && st.server(a, t) < 0) {
        if (auto ins = ls.best_insertion(st, a, t, nullptr)) {
          st.apply({{{st.slot(ins->first, t), std::move(ins->second)}}, std::nullopt});
        }
      }
    }
  }
  return st;
}

bool better(const SearchState& st, const std::optional<SearchState>& best) {
  if (!best) {
    return true;
  }
  const auto va = st.violation();
  const auto vb = best->violation();
  if ((va == 0) != (vb == 0)) {
    return va == 0;
  }
  if (va != vb) {
    return va < vb;
  }
  return st.base_objective() < best->base_objective();
}

} // namespace
} // namespace detail

SolveResult improve_plan(const Instance& inst, const Plan& plan, const SolveConfig& cfg,
                         const SplitSchedule* options) {
  validate_config(cfg);
  const auto start = detail::Clock::now();
  const auto deadline =
    start + std::chrono::duration_cast<detail::Clock::duration>(std::chrono::duration<double>(cfg.time_limit));
  if (options != nullptr && (options->atms.size() != inst.atms.size() || options->periods != inst.periods)) {
    throw std::invalid_argument("schedule does not match the instance");
  }

  double penalty = cfg.penalty.value_or(10.0 * static_cast<double>(detail::max_arc_cost(inst)));
  detail::LocalSearch ls(cfg, options, deadline);
  ls.set_penalty(penalty);
  detail::SearchState st = detail::state_from_plan(inst, plan, ls, cfg.weights);
  detail::Rng rng(cfg.seed);

  SolveResult result;
  std::optional<detail::SearchState> best;
  int stale = 0;
  std::int64_t restarts = 0;
  ls.descend(st, penalty);
  while (true) {
    if (detail::better(st, best)) {
      best = st;
      stale = 0;
      if (st.violation() == 0) {
        result.best_trace.push_back(st.base_objective());
      }
    } else {
      ++stale;
    }
    if (st.violation() > 0) {
      penalty *= 2;
    }
    if (ls.timed_out() || stale >= cfg.max_stale_restarts) {
      break;
    }
    st = *best;
    ls.perturb(st, rng, cfg.perturbation_strength);
    ls.descend(st, penalty);
    ++restarts;
  }

  result.plan = best->to_plan();
  result.cost = aggregate_cost(inst, result.plan, cfg.weights);
  result.iterations = ls.moves() + restarts;
  if (check_plan(inst, result.plan).empty()) {
    result.status = SolveStatus::feasible;
  } else {
    result.status = ls.timed_out() ? SolveStatus::timeout : SolveStatus::infeasible;
  }
  result.wall_time = std::chrono::duration<double>(detail::Clock::now() - start).count();
  return result;
}

SolveResult solve(const Instance& inst, const SplitSchedule& schedule, const SolveConfig& cfg) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  const Plan initial = construct_plan(inst, schedule, cfg.seed);
  SolveResult result = improve_plan(inst, initial, cfg, &schedule);
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<ParetoPoint> pareto_sweep(const Instance& inst, const SplitSchedule& schedule,
                                      const std::vector<Weights>& weights, const SolveConfig& base) {
  if (weights.size() < 2) {
    throw std::invalid_argument("a Pareto sweep needs at least two weight pairs");
  }
  std::vector<ParetoPoint> all;
  for (const Weights& w : weights) {
    SolveConfig cfg = base;
    cfg.weights = w;
    SolveResult r = solve(inst, schedule, cfg);
    if (r.status == SolveStatus::feasible || r.status == SolveStatus::optimal) {
      all.push_back({w, std::move(r)});
    }
  }
  std::vector<ParetoPoint> front;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& ci = all[i].result.cost;
    bool keep = true;
    for (std::size_t j = 0; j < all.size() && keep; ++j) {
      const auto& cj = all[j].result.cost;
      if (dominates(cj, ci)) {
        keep = false;
      } else if (j < i && cj.transport == ci.transport && cj.financial == ci.financial) {
        keep = false; // same point already kept
      }
    }
    if (keep) {
      front.push_back(std::move(all[i]));
    }
  }
  std::stable_sort(front.begin(), front.end(), [](const ParetoPoint& x, const ParetoPoint& y) {
    return x.result.cost.transport < y.result.cost.transport;
  });
  return front;
}

} // namespace atmroute
