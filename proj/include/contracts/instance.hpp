#ifndef CONTRACTS_INSTANCE_HPP
#define CONTRACTS_INSTANCE_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "contracts/rational.hpp"
#include "contracts/scalar.hpp"

namespace contracts {

/// A hidden-action, hidden-type principal-agent problem.
///
/// The agent has one of `types` private types (drawn with probabilities
/// `weights`), chooses one of `actions` costly actions, and one of `outcomes`
/// outcomes is realized.  `forecasts[t][i][j]` is the probability of outcome
/// j when an agent of type t takes action i.  The principal collects
/// `rewards[j]` and pays the agent according to a contract.
///
/// Costs are stored per type (`costs[t][i]`); `shared_costs` records whether
/// every type shares one cost vector, which several constructions require
/// and the serializer preserves.
///
/// Invariants of a valid instance (checked by `validate`):
///   * all dimensions positive and arrays consistent with them,
///   * costs nonnegative and nondecreasing within each type, with a zero-cost
///     action per type,
///   * rewards nonnegative and nondecreasing, with a zero-reward outcome,
///   * every forecast row is a probability distribution,
///   * type weights are positive and sum to one.
template <class S>
struct BasicInstance {
  int types = 0;
  int actions = 0;
  int outcomes = 0;
  bool shared_costs = true;
  std::vector<std::vector<S>> costs;                 // [types][actions]
  std::vector<S> rewards;                            // [outcomes]
  std::vector<std::vector<std::vector<S>>> forecasts;  // [types][actions][outcomes]
  std::vector<S> weights;                            // [types], sums to 1
  nlohmann::json provenance;                         // generator/transform metadata

  const S& cost(int t, int i) const { return costs[t][i]; }
};

using Instance = BasicInstance<Rat>;

/// Uniform type distribution 1/T.
std::vector<Rat> uniform_weights(int types);

/// Convenience constructor for shared-cost instances; fills uniform weights
/// when `weights` is empty and replicates `shared` across types.
Instance make_shared_cost_instance(std::vector<Rat> shared_costs,
                                   std::vector<Rat> rewards,
                                   std::vector<std::vector<std::vector<Rat>>> forecasts,
                                   std::vector<Rat> weights = {});

/// Same for per-type costs.
Instance make_typed_cost_instance(std::vector<std::vector<Rat>> costs,
                                  std::vector<Rat> rewards,
                                  std::vector<std::vector<std::vector<Rat>>> forecasts,
                                  std::vector<Rat> weights = {});

/// One validation finding, e.g. {"forecasts[0][2]", "row sums to 9/10"}.
struct Violation {
  std::string where;
  std::string message;
};

/// Returns every invariant violation (empty means the instance is valid).
std::vector<Violation> validate(const Instance& instance);

/// Throws InputError listing the violations unless `instance` is valid.
void require_valid(const Instance& instance);

/// Shifts each type's costs so its minimum is zero and all rewards so the
/// minimum reward is zero.  Forecasts and weights are unchanged.  Idempotent.
Instance normalize(const Instance& instance);

/// Expected principal reward of each (type, action):
/// R[t][i] = sum_j forecasts[t][i][j] * rewards[j].
template <class S>
std::vector<std::vector<S>> expected_rewards(const BasicInstance<S>& instance);

/// Multiset of consecutive cost gaps c[t][i+1] - c[t][i] over all types and
/// i, plus the sum of natural logs of the multiplicities of the distinct gap
/// values.  Shared-cost instances contribute each gap once per type, so the
/// multiset always has (actions - 1) * types members.
struct CostGapProfile {
  std::map<Rat, int> multiplicity;  // gap value -> count
  double log_multiplicity_sum = 0.0;
};

/// Requires at least two actions.
CostGapProfile cost_gap_statistic(const Instance& instance);

/// Returns a copy with costs[t][i] shifted by signs[t][i] * epsilon.
/// `signs` entries are -1, 0 or +1; pass a single row to apply the same
/// shift pattern to every type (preserves shared costs).  Throws InputError
/// if any shifted cost would be negative or if shapes mismatch.
Instance perturb_costs(const Instance& instance, const Rat& epsilon,
                       const std::vector<std::vector<int>>& signs);
Instance perturb_costs(const Instance& instance, const Rat& epsilon,
                       const std::vector<int>& shared_signs);

/// Converts an exact instance to doubles for the floating evaluation mode.
BasicInstance<double> to_double_instance(const Instance& instance);

// ---------------------------------------------------------------------------

template <class S>
std::vector<std::vector<S>> expected_rewards(const BasicInstance<S>& instance) {
  std::vector<std::vector<S>> table(instance.types, std::vector<S>(instance.actions, S(0)));
  for (int t = 0; t < instance.types; ++t) {
    for (int i = 0; i < instance.actions; ++i) {
      S sum(0);
      for (int j = 0; j < instance.outcomes; ++j) {
        sum += instance.forecasts[t][i][j] * instance.rewards[j];
      }
      table[t][i] = sum;
    }
  }
  return table;
}

}  // namespace contracts

#endif  // CONTRACTS_INSTANCE_HPP
