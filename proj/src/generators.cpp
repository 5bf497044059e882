#include "contracts/generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contracts/envelope.hpp"
#include "contracts/errors.hpp"

namespace contracts {

std::vector<std::vector<int>> Graph::adjacency() const {
  if (n < 1) throw InputError("graph needs at least one vertex");
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(n) + 1);
  std::set<std::pair<int, int>> seen;
  for (const auto& [u, v] : edges) {
    if (u < 1 || u > n || v < 1 || v > n) {
      throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") has an endpoint outside 1.." + std::to_string(n));
    }
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    const std::pair<int, int> key{std::min(u, v), std::max(u, v)};
    if (!seen.insert(key).second) {
      throw InputError("duplicate edge (" + std::to_string(key.first) + ", " +
                       std::to_string(key.second) + ")");
    }
    lists[u].push_back(v);
    lists[v].push_back(u);
  }
  for (auto& list : lists) std::sort(list.begin(), list.end());
  return lists;
}

int Graph::max_degree() const {
  int degree = 0;
  for (const auto& list : adjacency()) {
    degree = std::max(degree, static_cast<int>(list.size()));
  }
  return degree;
}

namespace {

std::vector<Rat> unit_row(int outcomes, int hit) {
  std::vector<Rat> row(outcomes, Rat(0));
  row[hit] = Rat(1);
  return row;
}

/// Lowest-index surplus-maximizing action of each type.
std::vector<int> surplus_pivots(const Instance& instance,
                                const std::vector<std::vector<Rat>>& expected) {
  std::vector<int> pivots(instance.types, 0);
  for (int t = 0; t < instance.types; ++t) {
    for (int i = 1; i < instance.actions; ++i) {
      if (expected[t][i] - instance.costs[t][i] >
          expected[t][pivots[t]] - instance.costs[t][pivots[t]]) {
        pivots[t] = i;
      }
    }
  }
  return pivots;
}

/// Restores the sorted-rewards invariant after outcomes were appended:
/// stable-sorts the outcome axis by reward, carrying every forecast row along.
void sort_outcome_axis(Instance* instance) {
  std::vector<int> order(instance->outcomes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return instance->rewards[a] < instance->rewards[b];
  });
  std::vector<Rat> rewards(instance->outcomes);
  for (int j = 0; j < instance->outcomes; ++j) rewards[j] = instance->rewards[order[j]];
  instance->rewards = std::move(rewards);
  for (auto& type_rows : instance->forecasts) {
    for (auto& row : type_rows) {
      std::vector<Rat> sorted(instance->outcomes);
      for (int j = 0; j < instance->outcomes; ++j) sorted[j] = row[order[j]];
      row = std::move(sorted);
    }
  }
}

void append_transform(Instance* instance, nlohmann::json note) {
  instance->provenance["transforms"].push_back(std::move(note));
}

}  // namespace

Instance geometric_cost_family(int actions, int types, const Rat& lambda) {
  if (actions < 1) throw InputError("geometric_cost_family needs at least one costly action");
  if (types < 2) throw InputError("geometric_cost_family needs at least two types");
  if (lambda <= Rat(types)) {
    throw InputError("geometric_cost_family needs lambda > types, got lambda = " +
                     to_fraction_string(lambda) + " with " + std::to_string(types) + " types");
  }
  const Rat log_types = rat_log(static_cast<unsigned long>(types));

  std::vector<Rat> costs(actions + 1, Rat(0));
  Rat power(1);
  for (int i = 1; i <= actions; ++i) {
    costs[i] = costs[i - 1] + power;
    power *= lambda;
  }

  // Expected reward of (type t, action i): c_i + i / (t * actions * ln(types))
  // with t counted from 1, so type t's surplus tops out at 1 / (t ln(types)).
  // The largest value belongs to (t = 1, i = actions) and fixes the reward of
  // the high outcome; every forecast scales against it.
  const Rat reward_high = costs[actions] + Rat(1) / log_types;
  std::vector<std::vector<std::vector<Rat>>> forecasts(
      types, std::vector<std::vector<Rat>>(actions + 1));
  for (int t = 0; t < types; ++t) {
    for (int i = 0; i <= actions; ++i) {
      const Rat expected =
          costs[i] + Rat(i) / (Rat(static_cast<long>(t + 1) * actions) * log_types);
      const Rat p = expected / reward_high;
      forecasts[t][i] = {Rat(1) - p, p};
    }
  }

  Instance out = make_shared_cost_instance(std::move(costs), {Rat(0), reward_high},
                                           std::move(forecasts));
  out.provenance = {{"generator", "geometric_cost_family"},
                    {"actions", actions},
                    {"types", types},
                    {"lambda", to_fraction_string(lambda)},
                    {"log_types", to_fraction_string(log_types)}};
  require_valid(out);
  return out;
}

Instance dominating_set_reduction(const Graph& graph) {
  const auto lists = graph.adjacency();
  int degree = 0;
  for (const auto& list : lists) degree = std::max(degree, static_cast<int>(list.size()));
  if (degree > 3) {
    throw InputError("dominating_set_reduction requires maximum degree 3, got " +
                     std::to_string(degree));
  }
  const int vertices = graph.n;
  const int outcomes = vertices + 1;  // outcome 0 is the null outcome

  // Vertex type of v: the four costly actions steer the realized outcome to a
  // neighbor of v (padded with v itself below degree 3) or to v.  Shadow type
  // of v: its free action already emits v's outcome, costly actions waste the
  // effort on the null outcome.
  std::vector<std::vector<std::vector<Rat>>> forecasts(
      2 * vertices, std::vector<std::vector<Rat>>(5));
  for (int v = 1; v <= vertices; ++v) {
    auto& vertex_rows = forecasts[v - 1];
    vertex_rows[0] = unit_row(outcomes, 0);
    for (int slot = 0; slot < 3; ++slot) {
      const int target =
          slot < static_cast<int>(lists[v].size()) ? lists[v][slot] : v;
      vertex_rows[1 + slot] = unit_row(outcomes, target);
    }
    vertex_rows[4] = unit_row(outcomes, v);

    auto& shadow_rows = forecasts[vertices + v - 1];
    shadow_rows[0] = unit_row(outcomes, v);
    for (int i = 1; i < 5; ++i) shadow_rows[i] = unit_row(outcomes, 0);
  }

  const Rat half(1, 2);
  std::vector<Rat> rewards(outcomes, Rat(1));
  rewards[0] = Rat(0);
  Instance out = make_shared_cost_instance({Rat(0), half, half, half, half},
                                           std::move(rewards), std::move(forecasts));
  nlohmann::json edge_list = nlohmann::json::array();
  for (const auto& [u, v] : graph.edges) edge_list.push_back({u, v});
  out.provenance = {{"generator", "dominating_set_reduction"},
                    {"vertices", vertices},
                    {"edges", std::move(edge_list)}};
  require_valid(out);
  return out;
}

Instance menu_advantage_family(int k) {
  if (k < 2) throw InputError("menu_advantage_family needs k >= 2");
  const int outcomes = k + 1;  // outcome 0 is the null outcome
  const Rat produce_cost = Rat(1) - Rat(1, k);
  const Rat explore_cost = produce_cost / k;

  // Informed type t only produces something with the expensive action, which
  // lands on its personal outcome; the uninformed type's cheap exploration
  // spreads uniformly over all personal outcomes.
  std::vector<std::vector<std::vector<Rat>>> forecasts(
      k + 1, std::vector<std::vector<Rat>>(3));
  for (int t = 0; t < k; ++t) {
    forecasts[t][0] = unit_row(outcomes, 0);
    forecasts[t][1] = unit_row(outcomes, 0);
    forecasts[t][2] = unit_row(outcomes, t + 1);
  }
  forecasts[k][0] = unit_row(outcomes, 0);
  forecasts[k][1].assign(outcomes, Rat(1, k));
  forecasts[k][1][0] = Rat(0);
  forecasts[k][2] = unit_row(outcomes, 0);

  std::vector<Rat> rewards(outcomes, Rat(1));
  rewards[0] = Rat(0);
  std::vector<Rat> weights(k + 1, Rat(k - 1) / (static_cast<long>(k) * k));
  weights[k] = Rat(1, k);
  Instance out = make_shared_cost_instance({Rat(0), explore_cost, produce_cost},
                                           std::move(rewards), std::move(forecasts),
                                           std::move(weights));
  out.provenance = {{"generator", "menu_advantage_family"}, {"k", k}};
  require_valid(out);
  return out;
}

Instance nonlinear_advantage_transform(const Instance& instance) {
  require_valid(instance);
  const auto expected = expected_rewards(instance);
  const auto pivots = surplus_pivots(instance, expected);
  Rat pivot_cost_max(0);
  for (int t = 0; t < instance.types; ++t) {
    if (instance.costs[t][pivots[t]] > pivot_cost_max) {
      pivot_cost_max = instance.costs[t][pivots[t]];
    }
  }
  const bool degenerate = pivot_cost_max == 0;
  const Rat scale = degenerate ? Rat(0) : Rat(1) / (Rat(2) * pivot_cost_max);

  Instance out = instance;
  out.outcomes = instance.outcomes + 2;
  out.rewards.clear();
  for (const Rat& r : instance.rewards) out.rewards.push_back(Rat(2) * r);
  out.rewards.push_back(Rat(0));  // fires exactly for the pivot action
  out.rewards.push_back(Rat(0));  // absorbs the rest of the halved mass
  const Rat half(1, 2);
  for (int t = 0; t < instance.types; ++t) {
    const Rat epsilon = scale * instance.costs[t][pivots[t]];
    for (int i = 0; i < instance.actions; ++i) {
      auto& row = out.forecasts[t][i];
      row.clear();
      for (const Rat& p : instance.forecasts[t][i]) row.push_back(half * p);
      const Rat signal = i == pivots[t] ? epsilon : Rat(0);
      row.push_back(signal);
      row.push_back(half - signal);
    }
  }
  sort_outcome_axis(&out);
  append_transform(&out, {{"transform", "nonlinear_advantage_transform"},
                          {"degenerate", degenerate},
                          {"pivot_actions", pivots},
                          {"epsilon_scale", to_fraction_string(scale)}});
  require_valid(out);
  return out;
}

Instance type_reveal_transform(const Instance& instance, const Rat& epsilon) {
  require_valid(instance);
  if (epsilon <= 0 || epsilon > Rat(1, 2)) {
    throw InputError("type_reveal_transform needs epsilon in (0, 1/2], got " +
                     to_fraction_string(epsilon));
  }
  const auto expected = expected_rewards(instance);
  const auto pivots = surplus_pivots(instance, expected);
  const int old_types = instance.types;
  const Rat keep = Rat(1) - epsilon;

  Instance out = instance;
  out.types = old_types + 1;
  out.outcomes = instance.outcomes + 2;
  out.rewards.clear();
  for (const Rat& r : instance.rewards) out.rewards.push_back(r / keep);
  out.rewards.push_back(Rat(0));
  out.rewards.push_back(Rat(0));
  for (int t = 0; t < old_types; ++t) {
    for (int i = 0; i < instance.actions; ++i) {
      auto& row = out.forecasts[t][i];
      row.clear();
      for (const Rat& p : instance.forecasts[t][i]) row.push_back(keep * p);
      const bool pivot = i == pivots[t];
      row.push_back(pivot ? epsilon : Rat(0));
      row.push_back(pivot ? Rat(0) : epsilon);
    }
  }
  // The fresh type is pure noise: every action mixes evenly over the two new
  // outcomes, so it earns nothing and costs nothing to serve.
  std::vector<Rat> noise_row(instance.outcomes, Rat(0));
  noise_row.push_back(Rat(1, 2));
  noise_row.push_back(Rat(1, 2));
  out.forecasts.emplace_back(instance.actions, noise_row);
  out.costs.push_back(instance.shared_costs ? instance.costs[0]
                                            : std::vector<Rat>(instance.actions, Rat(0)));
  const Rat shrink = Rat(old_types) / (old_types + 1);
  for (auto& w : out.weights) w *= shrink;
  out.weights.push_back(Rat(1, old_types + 1));
  sort_outcome_axis(&out);
  append_transform(&out, {{"transform", "type_reveal_transform"},
                          {"epsilon", to_fraction_string(epsilon)},
                          {"pivot_actions", pivots}});
  require_valid(out);
  return out;
}

Instance type_reveal_transform_for_slack(const Instance& instance, const Rat& zeta,
                                         const SolveOptions& options) {
  if (zeta <= 0) {
    throw InputError("type_reveal_transform_for_slack needs zeta > 0, got " +
                     to_fraction_string(zeta));
  }
  const Rat total_surplus = welfare(instance).value;
  Rat epsilon(1, 2);
  if (total_surplus > 0) {
    Rat slack = zeta;
    for (const auto kind : {BenchmarkKind::Single, BenchmarkKind::Menu}) {
      const auto report = stability_threshold(instance, kind, options);
      if (report.has_threshold && report.threshold < slack) slack = report.threshold;
    }
    const Rat bound = slack / (Rat(2 * instance.types) * total_surplus);
    if (bound < epsilon) epsilon = bound;
  }
  Instance out = type_reveal_transform(instance, epsilon);
  out.provenance["transforms"].back()["zeta"] = to_fraction_string(zeta);
  return out;
}

Instance collapse_to_standard(const Instance& instance) {
  require_valid(instance);
  const Envelope envelope = utility_envelope(instance);
  const Rat top_slope = envelope.slope.back();

  Instance out;
  if (top_slope == 0) {
    // Nothing generates value: a lone free action that always fails.
    out = make_shared_cost_instance({Rat(0)}, {Rat(0), Rat(0)}, {{{Rat(1), Rat(0)}}});
  } else {
    std::vector<Rat> costs{Rat(0)};
    std::vector<std::vector<Rat>> rows{{Rat(1), Rat(0)}};
    for (int s = 0; s < envelope.segments(); ++s) {
      if (envelope.slope[s] == 0) continue;  // only the base segment can be flat
      const Rat p = envelope.slope[s] / top_slope;
      costs.push_back(envelope.drop[s]);
      rows.push_back({Rat(1) - p, p});
    }
    out = make_shared_cost_instance(std::move(costs), {Rat(0), top_slope},
                                    {std::move(rows)});
  }
  out.provenance = instance.provenance;
  append_transform(&out, {{"transform", "collapse_to_standard"},
                          {"source_types", instance.types},
                          {"source_actions", instance.actions}});
  require_valid(out);
  return out;
}

Instance expand_to_typed(const Instance& standard, int actions, int types) {
  require_valid(standard);
  if (standard.types != 1 || standard.outcomes != 2) {
    throw InputError("expand_to_typed requires a single-type instance with two outcomes");
  }
  if (actions < 1 || types < 1) throw InputError("expand_to_typed needs positive dimensions");
  const Envelope envelope = utility_envelope(standard);
  const long needed = static_cast<long>(actions - 1) * types;
  if (static_cast<long>(envelope.breaks.size()) != needed) {
    throw InputError("expand_to_typed requires exactly (actions - 1) * types = " +
                     std::to_string(needed) + " envelope breaks, got " +
                     std::to_string(envelope.breaks.size()));
  }

  // Segment s of the input envelope contributes the line (slope W_s, drop D_s).
  // Type 1 takes segments 0..actions-1 as is; type t takes the segments of its
  // block relative to the block's first segment, so the per-type envelopes
  // stack back into the original one.  Scaling by `types` offsets the uniform
  // type weights.
  const Rat scale(types);
  std::vector<std::vector<Rat>> costs(types);
  std::vector<std::vector<Rat>> slopes(types);
  for (int i = 0; i < actions; ++i) {
    costs[0].push_back(scale * envelope.drop[i]);
    slopes[0].push_back(scale * envelope.slope[i]);
  }
  for (int t = 1; t < types; ++t) {
    const int base = (actions - 1) * t;
    costs[t].push_back(Rat(0));
    slopes[t].push_back(Rat(0));
    for (int i = 1; i < actions; ++i) {
      costs[t].push_back(scale * (envelope.drop[base + i] - envelope.drop[base]));
      slopes[t].push_back(scale * (envelope.slope[base + i] - envelope.slope[base]));
    }
  }

  Rat reward_high(0);
  for (const auto& per_type : slopes) {
    for (const Rat& s : per_type) {
      if (s > reward_high) reward_high = s;
    }
  }
  std::vector<std::vector<std::vector<Rat>>> forecasts(types);
  for (int t = 0; t < types; ++t) {
    for (int i = 0; i < actions; ++i) {
      const Rat p = reward_high == 0 ? Rat(0) : slopes[t][i] / reward_high;
      forecasts[t].push_back({Rat(1) - p, p});
    }
  }

  Instance out = make_typed_cost_instance(std::move(costs), {Rat(0), reward_high},
                                          std::move(forecasts));
  out.provenance = standard.provenance;
  append_transform(&out, {{"transform", "expand_to_typed"},
                          {"actions", actions},
                          {"types", types}});
  require_valid(out);
  return out;
}

Instance uniformize_costs(const Instance& instance) {
  require_valid(instance);
  // Shared slot multiset: each cost value with its largest per-type count.
  std::map<Rat, int> slots;
  for (int t = 0; t < instance.types; ++t) {
    std::map<Rat, int> own;
    for (const Rat& c : instance.costs[t]) ++own[c];
    for (const auto& [value, count] : own) {
      slots[value] = std::max(slots[value], count);
    }
  }
  std::vector<Rat> shared;
  for (const auto& [value, count] : slots) {
    shared.insert(shared.end(), count, value);
  }

  // Walk each type's sorted costs alongside the sorted slots: matching values
  // keep their rows, surplus slots replay the type's free action at the
  // slot's cost.  Such fillers are never chosen (they cost more for the same
  // forecast) and never implementable (the free action is a costless clone),
  // so every benchmark survives unchanged.
  std::vector<std::vector<std::vector<Rat>>> forecasts(instance.types);
  for (int t = 0; t < instance.types; ++t) {
    int next = 0;
    for (const Rat& value : shared) {
      if (next < instance.actions && instance.costs[t][next] == value) {
        forecasts[t].push_back(instance.forecasts[t][next]);
        ++next;
      } else {
        forecasts[t].push_back(instance.forecasts[t][0]);
      }
    }
    if (next != instance.actions) {
      throw InternalError("uniformize_costs failed to place every action of type " +
                          std::to_string(t));
    }
  }

  Instance out = make_shared_cost_instance(std::move(shared), instance.rewards,
                                           std::move(forecasts), instance.weights);
  out.provenance = instance.provenance;
  append_transform(&out, {{"transform", "uniformize_costs"},
                          {"source_actions", instance.actions},
                          {"actions", out.actions}});
  require_valid(out);
  return out;
}

}  // namespace contracts
