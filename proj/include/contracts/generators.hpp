#ifndef CONTRACTS_GENERATORS_HPP
#define CONTRACTS_GENERATORS_HPP

#include "contracts/benchmarks.hpp"
#include "contracts/graph.hpp"
#include "contracts/instance.hpp"
#include "contracts/rational.hpp"

namespace contracts {

/// Family with geometrically growing costs on which linear contracts perform
/// poorly.  There are `actions` + 1 actions with shared costs 0, 1, 1 + lambda,
/// 1 + lambda + lambda^2, ...; type t's expected reward for costly action i
/// exceeds its cost by i / (t * actions * ln(types)), so every type has
/// positive surplus but a linear contract can harvest almost none of it.
/// Two outcomes; the natural log enters through a fixed rational snapshot
/// (rat_log) recorded in the provenance, so derived identities -- e.g.
/// welfare = (1/T) sum_t 1 / (t ln T) -- hold exactly.
/// Requires types >= 2 and lambda > types.
Instance geometric_cost_family(int actions, int types, const Rat& lambda);

/// Encodes minimum dominating set (max degree 3) into contract design: for a
/// graph with N vertices the instance has 2N types, 5 shared-cost actions
/// (one free null, four at cost 1/2) and N + 1 outcomes (null plus one per
/// vertex).  Vertex types can steer probability onto their own vertex or a
/// neighbor; shadow types emit their vertex outcome for free.  Paying 1/2 on
/// the outcomes of a dominating set S earns exactly 3/4 - |S| / (4N), and
/// the best single contract and best menu both equal 3/4 - gamma / (4N)
/// where gamma is the domination number.
Instance dominating_set_reduction(const Graph& graph);

/// Family where menus strictly beat every single contract.  k informed types
/// (weight (k-1)/k^2 each) know which of k outcomes their costly action
/// produces; one uninformed type (weight 1/k) can instead explore cheaply
/// and produce a uniformly random outcome.  A menu extracts the full surplus
/// (2k^2 - 2k + 1) / k^3, while single contracts fall strictly short, with
/// the gap ratio growing in k.  Requires k >= 2.
Instance menu_advantage_family(int k);

/// Rebuilds the instance so that the best single contract extracts the full
/// first-best surplus while linear contracts gain nothing: probabilities are
/// halved, rewards doubled (expected rewards unchanged), and two zero-reward
/// outcomes are appended; the first fires with probability
/// epsilon_t = c[t][i*_t] / (2 max_t c[t][i*_t]) exactly under the type's
/// surplus-maximizing action i*_t, letting a contract reward that action
/// directly.  If every i*_t is free the transform is degenerate (flagged in
/// provenance) and the new outcomes never distinguish anything.
Instance nonlinear_advantage_transform(const Instance& instance);

/// Appends a type-revealing signal: every forecast row is scaled by
/// 1 - epsilon and epsilon lands on one of two new zero-reward outcomes --
/// the first exactly when the played action is the type's
/// surplus-maximizing one -- while old rewards are scaled by 1/(1 - epsilon)
/// so expected rewards stay put.  One new type (weight 1/(T+1); the old
/// weights shrink by T/(T+1)) mixes evenly over the new outcomes under every
/// action.  Welfare, the type-aware benchmark and the best linear contract
/// scale exactly by T/(T+1).  Requires 0 < epsilon <= 1/2.
Instance type_reveal_transform(const Instance& instance, const Rat& epsilon);

/// Chooses the epsilon for type_reveal_transform so small that the menu and
/// single-contract benchmarks of the output stay within `zeta` of their
/// exactly scaled values: epsilon = min(1/2, m / (2 T welfare)) where m is
/// the least of `zeta` and the feasibility stability thresholds of the
/// single and menu profile spaces (welfare 0 falls back to 1/2).
/// Requires zeta > 0.
Instance type_reveal_transform_for_slack(const Instance& instance, const Rat& zeta,
                                         const SolveOptions& options = {});

/// Collapses a typed instance to an observationally equivalent single-type,
/// two-outcome instance: each segment of the aggregate utility envelope with
/// slope W_s > 0 and drop D_s becomes an action of cost D_s succeeding with
/// probability W_s / W_max, plus a free null action.  The envelope (hence
/// welfare and the best linear contract) is preserved exactly.
Instance collapse_to_standard(const Instance& instance);

/// Inverse direction: spreads a single-type two-outcome instance with
/// exactly (actions - 1) * types envelope breaks over `types` uniform types
/// of `actions` actions each.  Type t >= 2 receives the envelope segments of
/// its block [b, b + actions - 1], b = (actions - 1)(t - 1), as actions with
/// costs and slopes scaled by `types` relative to the block start; type 1
/// additionally carries the base segment.  The aggregate envelope of the
/// result equals the input's envelope exactly.
Instance expand_to_typed(const Instance& standard, int actions, int types);

/// Rewrites a per-type-cost instance as a shared-cost one without touching
/// any benchmark: the shared cost vector takes each cost value with its
/// maximum per-type multiplicity, each type's actions fill the slots of
/// their own cost in order, and leftover slots become dummies that replay
/// the type's free action at a higher cost (never chosen and never
/// implementable, hence harmless).
Instance uniformize_costs(const Instance& instance);

}  // namespace contracts

#endif  // CONTRACTS_GENERATORS_HPP
