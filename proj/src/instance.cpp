#include "contracts/instance.hpp"

#include <cmath>
#include <sstream>

#include "contracts/errors.hpp"

namespace contracts {

std::vector<Rat> uniform_weights(int types) {
  if (types <= 0) throw InputError("instance needs at least one type");
  return std::vector<Rat>(types, make_rat(1, types));
}

namespace {

Instance assemble(std::vector<std::vector<Rat>> costs, bool shared,
                  std::vector<Rat> rewards,
                  std::vector<std::vector<std::vector<Rat>>> forecasts,
                  std::vector<Rat> weights) {
  Instance instance;
  instance.types = static_cast<int>(forecasts.size());
  instance.actions = instance.types > 0 ? static_cast<int>(forecasts[0].size()) : 0;
  instance.outcomes = static_cast<int>(rewards.size());
  instance.shared_costs = shared;
  instance.costs = std::move(costs);
  instance.rewards = std::move(rewards);
  instance.forecasts = std::move(forecasts);
  instance.weights = weights.empty() ? uniform_weights(instance.types) : std::move(weights);
  // Callers may hand over fractions that are not in lowest terms; equality
  // tests downstream assume canonical mpq values, so normalize here.
  for (auto& row : instance.costs) {
    for (Rat& v : row) v.canonicalize();
  }
  for (Rat& v : instance.rewards) v.canonicalize();
  for (auto& type_rows : instance.forecasts) {
    for (auto& row : type_rows) {
      for (Rat& v : row) v.canonicalize();
    }
  }
  for (Rat& v : instance.weights) v.canonicalize();
  return instance;
}

}  // namespace

Instance make_shared_cost_instance(std::vector<Rat> shared_costs, std::vector<Rat> rewards,
                                   std::vector<std::vector<std::vector<Rat>>> forecasts,
                                   std::vector<Rat> weights) {
  const int types = static_cast<int>(forecasts.size());
  std::vector<std::vector<Rat>> costs(types > 0 ? types : 0, shared_costs);
  return assemble(std::move(costs), true, std::move(rewards), std::move(forecasts),
                  std::move(weights));
}

Instance make_typed_cost_instance(std::vector<std::vector<Rat>> costs, std::vector<Rat> rewards,
                                  std::vector<std::vector<std::vector<Rat>>> forecasts,
                                  std::vector<Rat> weights) {
  return assemble(std::move(costs), false, std::move(rewards), std::move(forecasts),
                  std::move(weights));
}

namespace {

std::string coord(const char* field, int a) {
  std::ostringstream os;
  os << field << "[" << a << "]";
  return os.str();
}

std::string coord(const char* field, int a, int b) {
  std::ostringstream os;
  os << field << "[" << a << "][" << b << "]";
  return os.str();
}

}  // namespace

std::vector<Violation> validate(const Instance& instance) {
  std::vector<Violation> out;
  const int T = instance.types, n = instance.actions, m = instance.outcomes;
  if (T <= 0) out.push_back({"types", "must be positive"});
  if (n <= 0) out.push_back({"actions", "must be positive"});
  if (m <= 0) out.push_back({"outcomes", "must be positive"});
  if (!out.empty()) return out;

  if (static_cast<int>(instance.costs.size()) != T) {
    out.push_back({"costs", "expected one cost row per type"});
  }
  if (static_cast<int>(instance.rewards.size()) != m) {
    out.push_back({"rewards", "length must equal outcomes"});
  }
  if (static_cast<int>(instance.forecasts.size()) != T) {
    out.push_back({"forecasts", "expected one block per type"});
  }
  if (static_cast<int>(instance.weights.size()) != T) {
    out.push_back({"type_weights", "length must equal types"});
  }
  if (!out.empty()) return out;

  for (int t = 0; t < T; ++t) {
    if (static_cast<int>(instance.costs[t].size()) != n) {
      out.push_back({coord("costs", t), "length must equal actions"});
      continue;
    }
    bool has_zero = false;
    for (int i = 0; i < n; ++i) {
      const Rat& c = instance.costs[t][i];
      if (rat_sgn(c) < 0) out.push_back({coord("costs", t, i), "negative cost"});
      if (rat_sgn(c) == 0) has_zero = true;
      if (i > 0 && c < instance.costs[t][i - 1]) {
        out.push_back({coord("costs", t, i), "costs must be nondecreasing"});
      }
    }
    if (!has_zero) out.push_back({coord("costs", t), "no zero-cost action"});
    if (instance.shared_costs && t > 0 && instance.costs[t] != instance.costs[0]) {
      out.push_back({coord("costs", t), "shared_costs set but rows differ"});
    }
  }

  bool reward_zero = false;
  for (int j = 0; j < m; ++j) {
    const Rat& r = instance.rewards[j];
    if (rat_sgn(r) < 0) out.push_back({coord("rewards", j), "negative reward"});
    if (rat_sgn(r) == 0) reward_zero = true;
    if (j > 0 && r < instance.rewards[j - 1]) {
      out.push_back({coord("rewards", j), "rewards must be nondecreasing"});
    }
  }
  if (!reward_zero) out.push_back({"rewards", "no zero-reward outcome"});

  for (int t = 0; t < T; ++t) {
    if (static_cast<int>(instance.forecasts[t].size()) != n) {
      out.push_back({coord("forecasts", t), "expected one row per action"});
      continue;
    }
    for (int i = 0; i < n; ++i) {
      const auto& row = instance.forecasts[t][i];
      if (static_cast<int>(row.size()) != m) {
        out.push_back({coord("forecasts", t, i), "row length must equal outcomes"});
        continue;
      }
      Rat sum(0);
      for (int j = 0; j < m; ++j) {
        if (rat_sgn(row[j]) < 0 || row[j] > 1) {
          out.push_back({coord("forecasts", t, i), "entry " + std::to_string(j) +
                                                       " outside [0, 1]"});
        }
        sum += row[j];
      }
      if (sum != 1) {
        out.push_back({coord("forecasts", t, i), "row sums to " + to_fraction_string(sum)});
      }
    }
  }

  Rat weight_sum(0);
  for (int t = 0; t < T; ++t) {
    if (rat_sgn(instance.weights[t]) <= 0) {
      out.push_back({coord("type_weights", t), "weight must be positive"});
    }
    weight_sum += instance.weights[t];
  }
  if (weight_sum != 1) {
    out.push_back({"type_weights", "sum to " + to_fraction_string(weight_sum)});
  }
  return out;
}

void require_valid(const Instance& instance) {
  const auto violations = validate(instance);
  if (violations.empty()) return;
  std::ostringstream os;
  os << "invalid instance:";
  for (const auto& v : violations) os << "\n  " << v.where << ": " << v.message;
  throw InputError(os.str());
}

Instance normalize(const Instance& instance) {
  Instance result = instance;
  for (int t = 0; t < result.types; ++t) {
    if (result.costs[t].empty()) continue;
    Rat min_cost = result.costs[t][0];
    for (const Rat& c : result.costs[t]) min_cost = std::min(min_cost, c);
    for (Rat& c : result.costs[t]) c -= min_cost;
  }
  if (!result.rewards.empty()) {
    Rat min_reward = result.rewards[0];
    for (const Rat& r : result.rewards) min_reward = std::min(min_reward, r);
    for (Rat& r : result.rewards) r -= min_reward;
  }
  return result;
}

CostGapProfile cost_gap_statistic(const Instance& instance) {
  if (instance.actions < 2) {
    throw InputError("cost_gap_statistic requires at least two actions");
  }
  CostGapProfile profile;
  for (int t = 0; t < instance.types; ++t) {
    for (int i = 0; i + 1 < instance.actions; ++i) {
      profile.multiplicity[instance.costs[t][i + 1] - instance.costs[t][i]] += 1;
    }
  }
  for (const auto& [gap, count] : profile.multiplicity) {
    (void)gap;
    profile.log_multiplicity_sum += std::log(static_cast<double>(count));
  }
  return profile;
}

Instance perturb_costs(const Instance& instance, const Rat& epsilon,
                       const std::vector<std::vector<int>>& signs) {
  if (rat_sgn(epsilon) < 0) throw InputError("perturbation epsilon must be nonnegative");
  const bool one_row = signs.size() == 1;
  if (!one_row && static_cast<int>(signs.size()) != instance.types) {
    throw InputError("signs must have one row, or one row per type");
  }
  Instance result = instance;
  for (int t = 0; t < instance.types; ++t) {
    const auto& row = one_row ? signs[0] : signs[t];
    if (static_cast<int>(row.size()) != instance.actions) {
      throw InputError("signs row length must equal actions");
    }
    for (int i = 0; i < instance.actions; ++i) {
      if (row[i] < -1 || row[i] > 1) throw InputError("signs entries must be -1, 0 or +1");
      if (row[i] == 0) continue;
      Rat shifted = result.costs[t][i] + (row[i] > 0 ? epsilon : Rat(-epsilon));
      if (rat_sgn(shifted) < 0) {
        throw InputError("perturbation makes " + coord("costs", t, i) + " negative");
      }
      result.costs[t][i] = shifted;
    }
  }
  if (!one_row && instance.types > 1) {
    // Distinct per-type shifts generally break cost sharing.
    for (int t = 1; t < result.types && result.shared_costs; ++t) {
      if (result.costs[t] != result.costs[0]) result.shared_costs = false;
    }
  }
  return result;
}

Instance perturb_costs(const Instance& instance, const Rat& epsilon,
                       const std::vector<int>& shared_signs) {
  return perturb_costs(instance, epsilon, std::vector<std::vector<int>>{shared_signs});
}

BasicInstance<double> to_double_instance(const Instance& instance) {
  BasicInstance<double> out;
  out.types = instance.types;
  out.actions = instance.actions;
  out.outcomes = instance.outcomes;
  out.shared_costs = instance.shared_costs;
  out.provenance = instance.provenance;
  out.costs.resize(instance.costs.size());
  for (std::size_t t = 0; t < instance.costs.size(); ++t) {
    for (const Rat& c : instance.costs[t]) out.costs[t].push_back(c.get_d());
  }
  for (const Rat& r : instance.rewards) out.rewards.push_back(r.get_d());
  out.forecasts.resize(instance.forecasts.size());
  for (std::size_t t = 0; t < instance.forecasts.size(); ++t) {
    out.forecasts[t].resize(instance.forecasts[t].size());
    for (std::size_t i = 0; i < instance.forecasts[t].size(); ++i) {
      for (const Rat& p : instance.forecasts[t][i]) out.forecasts[t][i].push_back(p.get_d());
    }
  }
  for (const Rat& w : instance.weights) out.weights.push_back(w.get_d());
  return out;
}

}  // namespace contracts
