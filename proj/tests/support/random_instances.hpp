#ifndef CONTRACTS_TESTS_SUPPORT_RANDOM_INSTANCES_HPP
#define CONTRACTS_TESTS_SUPPORT_RANDOM_INSTANCES_HPP

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "contracts/graph.hpp"
#include "contracts/instance.hpp"
#include "contracts/response.hpp"

namespace contracts::testing {

/// Shape of a random valid instance.  All entries are small rationals so that
/// exhaustive oracles stay fast and exact arithmetic stays small.
struct RandomSpec {
  int types = 2;
  int actions = 3;
  int outcomes = 3;
  bool typed_costs = false;    // per-type cost vectors instead of shared ones
  bool distinct_costs = false; // strictly increasing costs (per type)
  bool big_reward = false;     // force the top reward to be at least 1
};

inline Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec = {}) {
  std::uniform_int_distribution<int> step(0, 5);
  std::uniform_int_distribution<int> positive_step(1, 5);
  std::uniform_int_distribution<int> mass(0, 9);
  std::uniform_int_distribution<int> weight(1, 9);

  const auto draw_costs = [&] {
    std::vector<Rat> costs{Rat(0)};
    for (int i = 1; i < spec.actions; ++i) {
      const int k = spec.distinct_costs ? positive_step(rng) : step(rng);
      costs.push_back(costs.back() + make_rat(k, 6));
    }
    return costs;
  };

  std::vector<Rat> rewards{Rat(0)};
  for (int j = 1; j < spec.outcomes; ++j) rewards.push_back(rewards.back() + make_rat(step(rng), 4));
  if (spec.big_reward && rewards.back() < 1) rewards.back() += 1;

  std::vector<std::vector<std::vector<Rat>>> forecasts(spec.types);
  for (int t = 0; t < spec.types; ++t) {
    for (int i = 0; i < spec.actions; ++i) {
      std::vector<int> numerators(spec.outcomes);
      long total = 0;
      for (int j = 0; j < spec.outcomes; ++j) total += numerators[j] = mass(rng);
      if (total == 0) {
        numerators[0] = 1;
        total = 1;
      }
      std::vector<Rat> row;
      for (int j = 0; j < spec.outcomes; ++j) row.push_back(make_rat(numerators[j], total));
      forecasts[t].push_back(std::move(row));
    }
  }

  std::vector<Rat> weights;
  long total_weight = 0;
  std::vector<int> raw(spec.types);
  for (int t = 0; t < spec.types; ++t) total_weight += raw[t] = weight(rng);
  for (int t = 0; t < spec.types; ++t) weights.push_back(make_rat(raw[t], total_weight));

  if (spec.typed_costs) {
    std::vector<std::vector<Rat>> costs;
    for (int t = 0; t < spec.types; ++t) costs.push_back(draw_costs());
    return make_typed_cost_instance(std::move(costs), std::move(rewards), std::move(forecasts),
                                    std::move(weights));
  }
  return make_shared_cost_instance(draw_costs(), std::move(rewards), std::move(forecasts),
                                   std::move(weights));
}

inline Contract random_contract(std::mt19937_64& rng, int outcomes) {
  std::uniform_int_distribution<int> step(0, 8);
  Contract contract;
  for (int j = 0; j < outcomes; ++j) contract.pay.push_back(make_rat(step(rng), 4));
  return contract;
}

inline Menu random_menu(std::mt19937_64& rng, int types, int outcomes) {
  Menu menu;
  for (int t = 0; t < types; ++t) menu.entries.push_back(random_contract(rng, outcomes));
  return menu;
}

/// Straight-line re-implementation of the agent's choice rule used as an
/// oracle: scan candidates in order, keep the first one that is strictly
/// better in utility, or ties utility with strictly better principal profit.
struct NaiveChoice {
  int entry = -1;
  int action = 0;
  Rat utility;
  Rat transfer;
  Rat profit;
};

inline NaiveChoice naive_single_choice(const Instance& instance, int t,
                                       const std::vector<Rat>& pay) {
  NaiveChoice best;
  bool have = false;
  for (int i = 0; i < instance.actions; ++i) {
    Rat transfer(0);
    Rat reward(0);
    for (int j = 0; j < instance.outcomes; ++j) {
      transfer += instance.forecasts[t][i][j] * pay[j];
      reward += instance.forecasts[t][i][j] * instance.rewards[j];
    }
    const Rat utility = transfer - instance.costs[t][i];
    const Rat profit = reward - transfer;
    if (!have || utility > best.utility ||
        (utility == best.utility && profit > best.profit)) {
      best = NaiveChoice{-1, i, utility, transfer, profit};
      have = true;
    }
  }
  return best;
}

inline NaiveChoice naive_menu_choice(const Instance& instance, int t, const Menu& menu) {
  NaiveChoice best;
  bool have = false;
  for (int e = 0; e < static_cast<int>(menu.entries.size()); ++e) {
    for (int i = 0; i < instance.actions; ++i) {
      Rat transfer(0);
      Rat reward(0);
      for (int j = 0; j < instance.outcomes; ++j) {
        transfer += instance.forecasts[t][i][j] * menu.entries[e].pay[j];
        reward += instance.forecasts[t][i][j] * instance.rewards[j];
      }
      const Rat utility = transfer - instance.costs[t][i];
      const Rat profit = reward - transfer;
      if (!have || utility > best.utility ||
          (utility == best.utility && profit > best.profit)) {
        best = NaiveChoice{e, i, utility, transfer, profit};
        have = true;
      }
    }
  }
  return best;
}

/// Aggregate utility U(alpha) computed directly from the definition.
inline Rat naive_utility_curve(const Instance& instance, const Rat& alpha) {
  const auto expected = expected_rewards(instance);
  Rat total(0);
  for (int t = 0; t < instance.types; ++t) {
    Rat best = alpha * expected[t][0] - instance.costs[t][0];
    for (int i = 1; i < instance.actions; ++i) {
      const Rat u = alpha * expected[t][i] - instance.costs[t][i];
      if (u > best) best = u;
    }
    total += instance.weights[t] * best;
  }
  return total;
}

/// Smallest dominating set size by exhaustive subset search (1-indexed graph).
inline int brute_force_domination_number(const Graph& graph) {
  const auto lists = graph.adjacency();
  const int n = graph.n;
  int best = n;
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    bool dominates = true;
    for (int v = 1; v <= n && dominates; ++v) {
      bool covered = (mask >> (v - 1)) & 1;
      for (const int u : lists[v]) covered = covered || ((mask >> (u - 1)) & 1);
      dominates = covered;
    }
    if (dominates) best = std::min(best, __builtin_popcountl(mask));
  }
  return best;
}

}  // namespace contracts::testing

#endif  // CONTRACTS_TESTS_SUPPORT_RANDOM_INSTANCES_HPP
