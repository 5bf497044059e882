#ifndef CONTRACTS_BENCHMARKS_HPP
#define CONTRACTS_BENCHMARKS_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "contracts/envelope.hpp"
#include "contracts/errors.hpp"
#include "contracts/instance.hpp"
#include "contracts/lp.hpp"
#include "contracts/response.hpp"
#include "contracts/scalar.hpp"

namespace contracts {

/// Knobs shared by the enumerating optimizers.  `budget` caps the number of
/// action profiles a call may enumerate (after per-type deduplication where
/// that applies); exceeding it raises BudgetError before any work is done.
/// `workers` selects the OpenMP team size: 0 = all available cores,
/// 1 = serial reference path.
struct SolveOptions {
  long budget = 1000000;
  int workers = 0;
};

struct MethodStats {
  long profiles_total = 0;       // profiles in the enumerated space
  long profiles_pruned = 0;      // skipped by the welfare upper bound
  long profiles_infeasible = 0;  // profiles whose LP has no feasible payment
  long lp_calls = 0;             // simplex invocations (row generation counts each)
  long pivots = 0;

  void absorb(const MethodStats& other) {
    profiles_total += other.profiles_total;
    profiles_pruned += other.profiles_pruned;
    profiles_infeasible += other.profiles_infeasible;
    lp_calls += other.lp_calls;
    pivots += other.pivots;
  }
};

/// Result of one benchmark computation.  `action_profile` is the
/// implemented per-type action witness; the optimizer also returns the
/// payment witness matching its kind (a share for linear, a contract for
/// single, a menu for the menu and type-aware benchmarks).  Ties between
/// equally profitable profiles resolve to the lexicographically smallest
/// profile, so results are deterministic and independent of the worker
/// count.
template <class S>
struct BasicBenchmarkResult {
  S value{};
  std::vector<int> action_profile;
  std::optional<S> alpha;
  std::optional<BasicContract<S>> contract;
  std::optional<BasicMenu<S>> menu;
  MethodStats stats;
};

using BenchmarkResult = BasicBenchmarkResult<Rat>;

enum class BenchmarkKind { Single, Menu };

/// First-best total surplus: each type is simply assigned its
/// surplus-maximizing action (no incentive constraints).
template <class S>
BasicBenchmarkResult<S> welfare(const BasicInstance<S>& instance, const Num<S>& num = {});

/// Best linear contract alpha in [0, 1].  Exact: the profit (1 - alpha) W(alpha)
/// falls within every envelope segment, so only segment starts compete.
template <class S>
BasicBenchmarkResult<S> opt_linear(const BasicInstance<S>& instance, const Num<S>& num = {});

/// Best profit if the principal could observe the agent's type and post a
/// separate contract per type.
template <class S>
BasicBenchmarkResult<S> opt_typeaware(const BasicInstance<S>& instance,
                                      const SolveOptions& options = {}, const Num<S>& num = {});

/// Best single contract posted to all types.
template <class S>
BasicBenchmarkResult<S> opt_single(const BasicInstance<S>& instance,
                                   const SolveOptions& options = {}, const Num<S>& num = {});

/// Best incentive-compatible menu with one contract per type.
template <class S>
BasicBenchmarkResult<S> opt_menu(const BasicInstance<S>& instance,
                                 const SolveOptions& options = {}, const Num<S>& num = {});

/// Independent oracle for opt_single on small instances: enumerates all
/// intersections of `outcomes` many preference boundaries and coordinate
/// planes, evaluates each nonnegative intersection point as a contract and
/// keeps the best.  Every optimal single contract is such a vertex.
template <class S>
BasicBenchmarkResult<S> opt_single_extreme_points(const BasicInstance<S>& instance,
                                                  const Num<S>& num = {});

/// Stability of the set of implementable profiles under cost perturbations.
/// For every action profile (full space, no deduplication) the scan measures
/// the infeasibility margin: the least epsilon such that relaxing every
/// incentive row by 2 epsilon makes the profile implementable.  `threshold`
/// is half the smallest positive margin; cost perturbations smaller than it
/// cannot make an unimplementable profile implementable.
template <class S>
struct StabilityReport {
  bool has_threshold = false;
  S threshold{};
  long feasible_profiles = 0;
  long infeasible_profiles = 0;
  MethodStats stats;
};

template <class S>
StabilityReport<S> stability_threshold(const BasicInstance<S>& instance, BenchmarkKind kind,
                                       const SolveOptions& options = {}, const Num<S>& num = {});

/// Implementability flag for every action profile of the full space, in
/// lexicographic profile order.
template <class S>
std::vector<bool> profile_feasibility_pattern(const BasicInstance<S>& instance,
                                              BenchmarkKind kind,
                                              const SolveOptions& options = {},
                                              const Num<S>& num = {});

// ---------------------------------------------------------------------------

namespace detail {

constexpr int kDirectRowLimit = 64;

/// Mixed-radix enumeration of per-type action choices.  `actions[t]` lists
/// the selectable action indices of type t in increasing order, so profile
/// rank order equals lexicographic order on the chosen action vectors.
struct ProfileSpace {
  std::vector<std::vector<int>> actions;
  std::vector<long> stride;
  long count = 1;

  void finalize(long budget, const char* what) {
    const int T = static_cast<int>(actions.size());
    stride.assign(T, 1);
    count = 1;
    for (int t = T - 1; t >= 0; --t) {
      stride[t] = count;
      const long radix = static_cast<long>(actions[t].size());
      if (count > budget / radix + 1) {
        throw BudgetError(std::string(what) + " needs more than " + std::to_string(budget) +
                          " action profiles; raise --budget to proceed");
      }
      count *= radix;
    }
    if (count > budget) {
      throw BudgetError(std::string(what) + " needs " + std::to_string(count) +
                        " action profiles, budget is " + std::to_string(budget));
    }
  }

  void decode(long k, std::vector<int>* digits) const {
    const int T = static_cast<int>(actions.size());
    digits->assign(T, 0);
    for (int t = 0; t < T; ++t) {
      (*digits)[t] = static_cast<int>((k / stride[t]) % static_cast<long>(actions[t].size()));
    }
  }

  std::vector<int> profile(const std::vector<int>& digits) const {
    std::vector<int> out(digits.size());
    for (std::size_t t = 0; t < digits.size(); ++t) out[t] = actions[t][digits[t]];
    return out;
  }
};

/// Groups each type's actions by identical (cost, forecast row) and keeps
/// the lowest index of every class: duplicate actions induce identical
/// incentive rows and identical payoffs, so one representative suffices.
template <class S>
ProfileSpace deduplicated_space(const BasicInstance<S>& instance, long budget,
                                const char* what) {
  ProfileSpace space;
  space.actions.resize(instance.types);
  for (int t = 0; t < instance.types; ++t) {
    auto& reps = space.actions[t];
    for (int i = 0; i < instance.actions; ++i) {
      bool duplicate = false;
      for (const int r : reps) {
        if (instance.costs[t][i] == instance.costs[t][r] &&
            instance.forecasts[t][i] == instance.forecasts[t][r]) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) reps.push_back(i);
    }
  }
  space.finalize(budget, what);
  return space;
}

template <class S>
ProfileSpace full_space(const BasicInstance<S>& instance, long budget, const char* what) {
  ProfileSpace space;
  space.actions.resize(instance.types);
  for (int t = 0; t < instance.types; ++t) {
    space.actions[t].resize(instance.actions);
    for (int i = 0; i < instance.actions; ++i) space.actions[t][i] = i;
  }
  space.finalize(budget, what);
  return space;
}

inline int resolve_workers(int workers) {
  if (workers == 1) return 1;
#ifdef _OPENMP
  return workers > 0 ? workers : omp_get_max_threads();
#else
  return 1;
#endif
}

/// Incentive rows of the single-contract LP for `profile`: for every type t
/// and alternative action p, following the recommendation a_t must beat p:
///   sum_j (F[t][a_t][j] - F[t][p][j]) x_j >= c[t][a_t] - c[t][p].
template <class S>
lp::LpProblem<S> single_contract_lp(const BasicInstance<S>& instance, const ProfileSpace& space,
                                    const std::vector<int>& profile) {
  const int m = instance.outcomes;
  lp::LpProblem<S> problem;
  problem.objective.assign(m, S(0));
  for (int t = 0; t < instance.types; ++t) {
    const auto& row = instance.forecasts[t][profile[t]];
    for (int j = 0; j < m; ++j) problem.objective[j] += instance.weights[t] * row[j];
  }
  for (int t = 0; t < instance.types; ++t) {
    const int a = profile[t];
    for (const int p : space.actions[t]) {
      if (p == a) continue;
      std::vector<S> row(m);
      for (int j = 0; j < m; ++j) {
        row[j] = instance.forecasts[t][a][j] - instance.forecasts[t][p][j];
      }
      problem.rows.push_back(std::move(row));
      problem.rhs.push_back(instance.costs[t][a] - instance.costs[t][p]);
    }
  }
  return problem;
}

/// Incentive rows of the menu LP for `profile`.  Variables are the T
/// payment vectors x^(t) laid out consecutively.  For every type t and
/// deviation (entry e, action i), honesty must beat the deviation:
///   F[t][a_t] . x^(t) - F[t][i] . x^(e) >= c[t][a_t] - c[t][i].
/// Rows with e == t (own-entry action deviations) are returned in
/// `own_rows`; they seed row generation.
template <class S>
lp::LpProblem<S> menu_lp(const BasicInstance<S>& instance, const ProfileSpace& space,
                         const std::vector<int>& profile, std::vector<int>* own_rows) {
  const int T = instance.types;
  const int m = instance.outcomes;
  lp::LpProblem<S> problem;
  problem.objective.assign(static_cast<std::size_t>(T) * m, S(0));
  for (int t = 0; t < T; ++t) {
    const auto& row = instance.forecasts[t][profile[t]];
    for (int j = 0; j < m; ++j) problem.objective[t * m + j] = instance.weights[t] * row[j];
  }
  for (int t = 0; t < T; ++t) {
    const int a = profile[t];
    for (int e = 0; e < T; ++e) {
      for (const int i : space.actions[t]) {
        if (e == t && i == a) continue;
        std::vector<S> row(static_cast<std::size_t>(T) * m, S(0));
        for (int j = 0; j < m; ++j) row[t * m + j] += instance.forecasts[t][a][j];
        for (int j = 0; j < m; ++j) row[e * m + j] -= instance.forecasts[t][i][j];
        if (e == t && own_rows != nullptr) {
          own_rows->push_back(static_cast<int>(problem.rows.size()));
        }
        problem.rows.push_back(std::move(row));
        problem.rhs.push_back(instance.costs[t][a] - instance.costs[t][i]);
      }
    }
  }
  return problem;
}

/// Solves `full` either directly or, past kDirectRowLimit rows, by row
/// generation from `seed`: solve a subset, add rows the candidate point (or
/// unbounded ray) violates, repeat.  The returned solution and certificate
/// refer to the full row set and are re-verified in exact mode.
template <class S>
lp::LpSolution<S> solve_rows(const lp::LpProblem<S>& full, const std::vector<int>& seed,
                             const Num<S>& num, MethodStats* stats) {
  const int total_rows = full.num_rows();
  if (total_rows <= kDirectRowLimit) {
    lp::LpSolution<S> solution = lp::solve(full, num);
    stats->lp_calls += 1;
    stats->pivots += solution.pivots;
    return solution;
  }

  std::vector<char> active(total_rows, 0);
  std::vector<int> active_rows;
  for (const int r : seed) {
    if (!active[r]) {
      active[r] = 1;
      active_rows.push_back(r);
    }
  }

  for (;;) {
    lp::LpProblem<S> sub;
    sub.objective = full.objective;
    sub.free_cols = full.free_cols;
    sub.rows.reserve(active_rows.size());
    sub.rhs.reserve(active_rows.size());
    for (const int r : active_rows) {
      sub.rows.push_back(full.rows[r]);
      sub.rhs.push_back(full.rhs[r]);
    }
    lp::LpSolution<S> solution = lp::solve(sub, num);
    stats->lp_calls += 1;
    stats->pivots += solution.pivots;

    const auto pad_duals = [&](const std::vector<S>& sub_y) {
      std::vector<S> y(total_rows, S(0));
      for (std::size_t k = 0; k < active_rows.size(); ++k) y[active_rows[k]] = sub_y[k];
      return y;
    };

    if (solution.status == lp::LpStatus::Infeasible) {
      solution.farkas = pad_duals(solution.farkas);
      if constexpr (Num<S>::exact) lp::verify_solution(full, solution, num);
      return solution;
    }

    bool added = false;
    const auto add_row = [&](int r) {
      if (!active[r]) {
        active[r] = 1;
        active_rows.push_back(r);
        added = true;
      }
    };
    for (int r = 0; r < total_rows; ++r) {
      if (active[r]) continue;
      if (num.lt(lp::dot(full.rows[r], solution.x), full.rhs[r])) add_row(r);
    }
    if (solution.status == lp::LpStatus::Unbounded) {
      for (int r = 0; r < total_rows; ++r) {
        if (active[r]) continue;
        if (num.sgn(lp::dot(full.rows[r], solution.ray)) < 0) add_row(r);
      }
    }
    if (!added) {
      if (solution.status == lp::LpStatus::Optimal) {
        solution.duals = pad_duals(solution.duals);
      }
      if constexpr (Num<S>::exact) lp::verify_solution(full, solution, num);
      return solution;
    }
    std::sort(active_rows.begin(), active_rows.end());
  }
}

/// Per-profile enumeration shared by opt_single and opt_menu.  Profiles are
/// visited in descending order of the separable welfare upper bound
/// sum_t w_t (R[t][a_t] - c[t][a_t]) -- no implementable payment scheme for
/// a profile can net more -- and a profile is skipped when its bound falls
/// strictly below the incumbent.  Ties keep the lexicographically smallest
/// profile, which makes the outcome independent of visit order and worker
/// count.
template <class S>
struct EnumIncumbent {
  bool have = false;
  S value{};
  long rank = 0;
  std::vector<S> payments;
};

template <class S, class SolveProfile>
EnumIncumbent<S> enumerate_profiles(const BasicInstance<S>& instance, const ProfileSpace& space,
                                    int workers, const Num<S>& num, MethodStats* stats,
                                    SolveProfile&& solve_profile) {
  const auto expected = expected_rewards(instance);
  const int T = instance.types;
  std::vector<std::vector<S>> contrib(T);
  std::vector<std::vector<double>> contrib_key(T);
  for (int t = 0; t < T; ++t) {
    for (const int a : space.actions[t]) {
      const S value = instance.weights[t] * (expected[t][a] - instance.costs[t][a]);
      // Approximate sort keys; ordering only affects speed, never results.
      if constexpr (Num<S>::exact) {
        contrib_key[t].push_back(value.get_d());
      } else {
        contrib_key[t].push_back(static_cast<double>(value));
      }
      contrib[t].push_back(value);
    }
  }

  std::vector<long> order(space.count);
  std::vector<double> key(space.count);
  {
    std::vector<int> digits;
    for (long k = 0; k < space.count; ++k) {
      order[k] = k;
      space.decode(k, &digits);
      double bound = 0.0;
      for (int t = 0; t < T; ++t) bound += contrib_key[t][digits[t]];
      key[k] = bound;
    }
  }
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    if (key[a] != key[b]) return key[a] > key[b];
    return a < b;
  });

  EnumIncumbent<S> incumbent;
  stats->profiles_total += space.count;
  const int team = resolve_workers(workers);
  (void)team;

  // Exceptions may not escape an OpenMP region; park the first one and
  // rethrow after the team joins.
  std::exception_ptr failure = nullptr;
  std::atomic<bool> failed{false};

#ifdef _OPENMP
#pragma omp parallel num_threads(team) if (team > 1)
#endif
  {
    MethodStats local_stats;
    std::vector<int> digits;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 4)
#endif
    for (long idx = 0; idx < space.count; ++idx) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        const long k = order[idx];
        space.decode(k, &digits);
        S bound(0);
        for (int t = 0; t < T; ++t) bound += contrib[t][digits[t]];

        bool skip = false;
#ifdef _OPENMP
#pragma omp critical(contracts_enum_incumbent)
#endif
        {
          if (incumbent.have && num.lt(bound, incumbent.value)) skip = true;
        }
        if (skip) {
          local_stats.profiles_pruned += 1;
          continue;
        }

        const std::vector<int> profile = space.profile(digits);
        std::optional<std::pair<S, std::vector<S>>> outcome =
            solve_profile(profile, &local_stats);
        if (!outcome.has_value()) {
          local_stats.profiles_infeasible += 1;
          continue;
        }
#ifdef _OPENMP
#pragma omp critical(contracts_enum_incumbent)
#endif
        {
          const bool better =
              !incumbent.have || num.lt(incumbent.value, outcome->first) ||
              (num.eq(incumbent.value, outcome->first) && k < incumbent.rank);
          if (better) {
            incumbent.have = true;
            incumbent.value = outcome->first;
            incumbent.rank = k;
            incumbent.payments = std::move(outcome->second);
          }
        }
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical(contracts_enum_failure)
#endif
        {
          if (!failure) failure = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
#ifdef _OPENMP
#pragma omp critical(contracts_enum_stats)
#endif
    { stats->absorb(local_stats); }
  }
  if (failure) std::rethrow_exception(failure);
  return incumbent;
}

}  // namespace detail

template <class S>
BasicBenchmarkResult<S> welfare(const BasicInstance<S>& instance, const Num<S>& num) {
  const auto expected = expected_rewards(instance);
  BasicBenchmarkResult<S> result;
  result.value = S(0);
  result.action_profile.assign(instance.types, 0);
  for (int t = 0; t < instance.types; ++t) {
    int best = 0;
    S best_surplus = expected[t][0] - instance.costs[t][0];
    for (int i = 1; i < instance.actions; ++i) {
      const S surplus = expected[t][i] - instance.costs[t][i];
      if (num.lt(best_surplus, surplus)) {
        best = i;
        best_surplus = surplus;
      }
    }
    result.action_profile[t] = best;
    result.value += instance.weights[t] * best_surplus;
  }
  return result;
}

template <class S>
BasicBenchmarkResult<S> opt_linear(const BasicInstance<S>& instance, const Num<S>& num) {
  const BasicEnvelope<S> envelope = utility_envelope(instance, num);
  // Profit decreases within each segment, so the best alpha is a segment
  // start; scanning them in increasing order keeps the smallest optimal one.
  S best_alpha(0);
  S best_profit = envelope.slope[0];
  for (int s = 1; s < envelope.segments(); ++s) {
    const S alpha = envelope.start[s];
    const S profit = (S(1) - alpha) * envelope.slope[s];
    if (num.lt(best_profit, profit)) {
      best_profit = profit;
      best_alpha = alpha;
    }
  }
  BasicBenchmarkResult<S> result;
  result.alpha = best_alpha;
  const ResponseReport<S> report = evaluate_linear(instance, best_alpha, num);
  result.value = report.expected_profit;
  for (const auto& choice : report.choices) result.action_profile.push_back(choice.action);
  if constexpr (Num<S>::exact) {
    if (!num.eq(result.value, best_profit)) {
      throw InternalError("linear-contract profit does not match its envelope value");
    }
  }
  return result;
}

template <class S>
BasicBenchmarkResult<S> opt_typeaware(const BasicInstance<S>& instance,
                                      const SolveOptions& options, const Num<S>& num) {
  const detail::ProfileSpace space =
      detail::deduplicated_space(instance, options.budget, "opt_typeaware");
  long considered = 0;
  for (const auto& reps : space.actions) considered += static_cast<long>(reps.size());
  if (considered > options.budget) {
    throw BudgetError("opt_typeaware needs " + std::to_string(considered) +
                      " per-type solves, budget is " + std::to_string(options.budget));
  }

  const auto expected = expected_rewards(instance);
  BasicBenchmarkResult<S> result;
  result.value = S(0);
  result.stats.profiles_total = considered;
  BasicMenu<S> menu;
  for (int t = 0; t < instance.types; ++t) {
    bool have = false;
    S best_profit(0);
    int best_action = 0;
    std::vector<S> best_pay;
    for (const int i : space.actions[t]) {
      lp::LpProblem<S> problem;
      problem.objective = instance.forecasts[t][i];
      for (const int p : space.actions[t]) {
        if (p == i) continue;
        std::vector<S> row(instance.outcomes);
        for (int j = 0; j < instance.outcomes; ++j) {
          row[j] = instance.forecasts[t][i][j] - instance.forecasts[t][p][j];
        }
        problem.rows.push_back(std::move(row));
        problem.rhs.push_back(instance.costs[t][i] - instance.costs[t][p]);
      }
      const lp::LpSolution<S> solution = lp::solve(problem, num);
      result.stats.lp_calls += 1;
      result.stats.pivots += solution.pivots;
      if (solution.status == lp::LpStatus::Infeasible) {
        result.stats.profiles_infeasible += 1;
        continue;
      }
      if (solution.status != lp::LpStatus::Optimal) {
        throw InternalError(
            "per-type payment LP reported unbounded, but payments are bounded below");
      }
      const S profit = expected[t][i] - solution.value;
      if (!have || num.lt(best_profit, profit)) {
        have = true;
        best_profit = profit;
        best_action = i;
        best_pay = solution.x;
      }
    }
    if (!have) {
      throw InternalError(
          "found a type with no implementable action, but the cheapest action always is");
    }
    result.value += instance.weights[t] * best_profit;
    result.action_profile.push_back(best_action);
    menu.entries.push_back(BasicContract<S>{std::move(best_pay)});
  }
  result.menu = std::move(menu);
  return result;
}

template <class S>
BasicBenchmarkResult<S> opt_single(const BasicInstance<S>& instance, const SolveOptions& options,
                                   const Num<S>& num) {
  const detail::ProfileSpace space =
      detail::deduplicated_space(instance, options.budget, "opt_single");
  const auto expected = expected_rewards(instance);

  BasicBenchmarkResult<S> result;
  const auto solve_profile =
      [&](const std::vector<int>& profile,
          MethodStats* stats) -> std::optional<std::pair<S, std::vector<S>>> {
    const lp::LpProblem<S> problem = single_contract_lp(instance, space, profile);
    const lp::LpSolution<S> solution = detail::solve_rows(problem, {}, num, stats);
    if (solution.status == lp::LpStatus::Infeasible) return std::nullopt;
    if (solution.status != lp::LpStatus::Optimal) {
      throw InternalError(
          "payment LP reported unbounded, but payments are bounded below");
    }
    S base(0);
    for (int t = 0; t < instance.types; ++t) {
      base += instance.weights[t] * expected[t][profile[t]];
    }
    return std::make_pair(base - solution.value, solution.x);
  };

  detail::EnumIncumbent<S> incumbent = detail::enumerate_profiles(
      instance, space, options.workers, num, &result.stats, solve_profile);
  if (!incumbent.have) {
    throw InternalError(
        "no implementable profile found, but the zero contract implements one");
  }
  result.value = incumbent.value;
  std::vector<int> digits;
  space.decode(incumbent.rank, &digits);
  result.action_profile = space.profile(digits);
  result.contract = BasicContract<S>{std::move(incumbent.payments)};
  if constexpr (Num<S>::exact) {
    const ResponseReport<S> report = evaluate_contract(instance, *result.contract, num);
    if (!num.eq(report.expected_profit, result.value)) {
      throw InternalError("single-contract witness does not reproduce the optimal value");
    }
  }
  return result;
}

template <class S>
BasicBenchmarkResult<S> opt_menu(const BasicInstance<S>& instance, const SolveOptions& options,
                                 const Num<S>& num) {
  const detail::ProfileSpace space =
      detail::deduplicated_space(instance, options.budget, "opt_menu");
  const auto expected = expected_rewards(instance);
  const int m = instance.outcomes;

  BasicBenchmarkResult<S> result;
  const auto solve_profile =
      [&](const std::vector<int>& profile,
          MethodStats* stats) -> std::optional<std::pair<S, std::vector<S>>> {
    std::vector<int> own_rows;
    const lp::LpProblem<S> problem = detail::menu_lp(instance, space, profile, &own_rows);
    const lp::LpSolution<S> solution = detail::solve_rows(problem, own_rows, num, stats);
    if (solution.status == lp::LpStatus::Infeasible) return std::nullopt;
    if (solution.status != lp::LpStatus::Optimal) {
      throw InternalError(
          "payment LP reported unbounded, but payments are bounded below");
    }
    S base(0);
    for (int t = 0; t < instance.types; ++t) {
      base += instance.weights[t] * expected[t][profile[t]];
    }
    return std::make_pair(base - solution.value, solution.x);
  };

  detail::EnumIncumbent<S> incumbent = detail::enumerate_profiles(
      instance, space, options.workers, num, &result.stats, solve_profile);
  if (!incumbent.have) {
    throw InternalError(
        "no implementable profile found, but the zero menu implements one");
  }
  result.value = incumbent.value;
  std::vector<int> digits;
  space.decode(incumbent.rank, &digits);
  result.action_profile = space.profile(digits);
  BasicMenu<S> menu;
  for (int t = 0; t < instance.types; ++t) {
    menu.entries.push_back(BasicContract<S>{std::vector<S>(
        incumbent.payments.begin() + static_cast<long>(t) * m,
        incumbent.payments.begin() + static_cast<long>(t + 1) * m)});
  }
  result.menu = std::move(menu);
  if constexpr (Num<S>::exact) {
    const IcReport<S> ic = verify_ic(instance, *result.menu, &result.action_profile, num);
    if (!ic.ok) {
      throw InternalError("menu witness violates incentive compatibility");
    }
    const ResponseReport<S> report = evaluate_menu(instance, *result.menu, num);
    if (!num.eq(report.expected_profit, result.value)) {
      throw InternalError("menu witness does not reproduce the optimal value");
    }
  }
  return result;
}

namespace detail {

/// Solves square * x = rhs exactly; returns false when singular.
template <class S>
bool solve_square_system(std::vector<std::vector<S>> square, std::vector<S> rhs,
                         std::vector<S>* x, const Num<S>& num) {
  const int n = static_cast<int>(square.size());
  std::vector<int> cols(n);
  for (int j = 0; j < n; ++j) cols[j] = j;
  for (int step = 0; step < n; ++step) {
    int pr = -1;
    for (int r = step; r < n && pr < 0; ++r) {
      if (!num.is_zero(square[r][step])) pr = r;
    }
    if (pr < 0) return false;
    std::swap(square[step], square[pr]);
    std::swap(rhs[step], rhs[pr]);
    const S head = square[step][step];
    for (int j = step; j < n; ++j) square[step][j] /= head;
    rhs[step] /= head;
    for (int r = 0; r < n; ++r) {
      if (r == step) continue;
      const S factor = square[r][step];
      if (factor == S(0)) continue;
      for (int j = step; j < n; ++j) square[r][j] -= factor * square[step][j];
      rhs[r] -= factor * rhs[step];
    }
  }
  *x = std::move(rhs);
  return true;
}

}  // namespace detail

template <class S>
BasicBenchmarkResult<S> opt_single_extreme_points(const BasicInstance<S>& instance,
                                                  const Num<S>& num) {
  const int m = instance.outcomes;
  // Candidate hyperplanes: agent preference boundaries between two actions
  // of some type, normalized to leading coefficient one and deduplicated,
  // plus the coordinate planes x_j = 0.
  std::vector<std::pair<std::vector<S>, S>> planes;
  const auto push_plane = [&](std::vector<S> coeff, S rhs) {
    int lead = -1;
    for (int j = 0; j < m && lead < 0; ++j) {
      if (!num.is_zero(coeff[j])) lead = j;
    }
    if (lead < 0) return;
    const S head = coeff[lead];
    for (int j = 0; j < m; ++j) coeff[j] /= head;
    rhs /= head;
    for (const auto& known : planes) {
      if (known.first == coeff && known.second == rhs) return;
    }
    planes.emplace_back(std::move(coeff), std::move(rhs));
  };
  for (int t = 0; t < instance.types; ++t) {
    for (int i = 0; i < instance.actions; ++i) {
      for (int i2 = i + 1; i2 < instance.actions; ++i2) {
        std::vector<S> coeff(m);
        for (int j = 0; j < m; ++j) {
          coeff[j] = instance.forecasts[t][i][j] - instance.forecasts[t][i2][j];
        }
        push_plane(std::move(coeff), instance.costs[t][i] - instance.costs[t][i2]);
      }
    }
  }
  for (int j = 0; j < m; ++j) {
    std::vector<S> coeff(m, S(0));
    coeff[j] = S(1);
    push_plane(std::move(coeff), S(0));
  }

  BasicBenchmarkResult<S> result;
  BasicContract<S> best{std::vector<S>(m, S(0))};
  {
    const ResponseReport<S> zero = evaluate_contract(instance, best, num);
    result.value = zero.expected_profit;
    for (const auto& choice : zero.choices) result.action_profile.push_back(choice.action);
  }

  const int H = static_cast<int>(planes.size());
  std::vector<int> pick(m);
  const auto try_point = [&](const std::vector<S>& x) {
    for (int j = 0; j < m; ++j) {
      if (num.sgn(x[j]) < 0) return;
    }
    BasicContract<S> contract{x};
    const ResponseReport<S> report = evaluate_contract(instance, contract, num);
    if (num.lt(result.value, report.expected_profit)) {
      result.value = report.expected_profit;
      best = contract;
      result.action_profile.clear();
      for (const auto& choice : report.choices) result.action_profile.push_back(choice.action);
    }
  };
  // All size-m subsets of planes.
  const std::function<void(int, int)> recurse = [&](int start, int depth) {
    if (depth == m) {
      std::vector<std::vector<S>> square;
      std::vector<S> rhs;
      for (int d = 0; d < m; ++d) {
        square.push_back(planes[pick[d]].first);
        rhs.push_back(planes[pick[d]].second);
      }
      std::vector<S> x;
      if (detail::solve_square_system(std::move(square), std::move(rhs), &x, num)) {
        try_point(x);
      }
      return;
    }
    for (int h = start; h < H; ++h) {
      pick[depth] = h;
      recurse(h + 1, depth + 1);
    }
  };
  recurse(0, 0);
  result.contract = best;
  return result;
}

namespace detail {

template <class S>
struct StabilityScan {
  std::vector<char> feasible;
  bool has_margin = false;
  S min_margin{};
  MethodStats stats;
};

/// Feasibility of every full-space profile, each with its infeasibility
/// margin: the optimal epsilon of the profile's incentive LP with every row
/// relaxed by 2 epsilon (epsilon free).  Positive margin = unimplementable.
template <class S>
StabilityScan<S> stability_scan(const BasicInstance<S>& instance, BenchmarkKind kind,
                                const SolveOptions& options, const Num<S>& num) {
  const ProfileSpace space = full_space(instance, options.budget, "stability scan");
  StabilityScan<S> scan;
  scan.feasible.assign(space.count, 0);
  scan.stats.profiles_total = space.count;
  const int team = resolve_workers(options.workers);
  (void)team;

  std::exception_ptr failure = nullptr;
  std::atomic<bool> failed{false};

#ifdef _OPENMP
#pragma omp parallel num_threads(team) if (team > 1)
#endif
  {
    MethodStats local_stats;
    bool local_has = false;
    S local_min{};
    std::vector<int> digits;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 4)
#endif
    for (long k = 0; k < space.count; ++k) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        space.decode(k, &digits);
        const std::vector<int> profile = space.profile(digits);
        std::vector<int> own_rows;
        lp::LpProblem<S> base =
            kind == BenchmarkKind::Menu
                ? menu_lp(instance, space, profile, &own_rows)
                : single_contract_lp(instance, space, profile);
        bool trivially_feasible = true;
        for (const S& r : base.rhs) {
          if (num.sgn(r) > 0) {
            trivially_feasible = false;
            break;
          }
        }
        if (trivially_feasible) {  // the zero payment implements the profile
          scan.feasible[k] = 1;
          continue;
        }
        const int cols = base.num_cols();
        for (auto& row : base.rows) row.push_back(S(2));
        base.objective.assign(cols, S(0));
        base.objective.push_back(S(1));
        base.free_cols.assign(cols, false);
        base.free_cols.push_back(true);

        const lp::LpSolution<S> solution =
            kind == BenchmarkKind::Menu ? solve_rows(base, own_rows, num, &local_stats)
                                        : solve_rows(base, {}, num, &local_stats);
        if (solution.status == lp::LpStatus::Infeasible) {
          throw InternalError(
              "the relaxed incentive LP reported infeasible, but it is feasible by construction");
        }
        if (solution.status == lp::LpStatus::Unbounded ||
            num.sgn(solution.value) <= 0) {
          scan.feasible[k] = 1;
          continue;
        }
        local_stats.profiles_infeasible += 1;
        if (!local_has || num.lt(solution.value, local_min)) {
          local_has = true;
          local_min = solution.value;
        }
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical(contracts_stability_failure)
#endif
        {
          if (!failure) failure = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
#ifdef _OPENMP
#pragma omp critical(contracts_stability_merge)
#endif
    {
      scan.stats.absorb(local_stats);
      if (local_has && (!scan.has_margin || num.lt(local_min, scan.min_margin))) {
        scan.has_margin = true;
        scan.min_margin = local_min;
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return scan;
}

}  // namespace detail

template <class S>
StabilityReport<S> stability_threshold(const BasicInstance<S>& instance, BenchmarkKind kind,
                                       const SolveOptions& options, const Num<S>& num) {
  const detail::StabilityScan<S> scan = detail::stability_scan(instance, kind, options, num);
  StabilityReport<S> report;
  report.stats = scan.stats;
  for (const char f : scan.feasible) {
    if (f) {
      report.feasible_profiles += 1;
    } else {
      report.infeasible_profiles += 1;
    }
  }
  if (scan.has_margin) {
    report.has_threshold = true;
    report.threshold = scan.min_margin / S(2);
  }
  return report;
}

template <class S>
std::vector<bool> profile_feasibility_pattern(const BasicInstance<S>& instance,
                                              BenchmarkKind kind, const SolveOptions& options,
                                              const Num<S>& num) {
  const detail::StabilityScan<S> scan = detail::stability_scan(instance, kind, options, num);
  std::vector<bool> pattern(scan.feasible.size());
  for (std::size_t k = 0; k < scan.feasible.size(); ++k) pattern[k] = scan.feasible[k] != 0;
  return pattern;
}

}  // namespace contracts

#endif  // CONTRACTS_BENCHMARKS_HPP
