#ifndef CONTRACTS_ENVELOPE_HPP
#define CONTRACTS_ENVELOPE_HPP

#include <algorithm>
#include <tuple>
#include <vector>

#include "contracts/errors.hpp"
#include "contracts/instance.hpp"
#include "contracts/scalar.hpp"

namespace contracts {

/// One switch of some type's chosen action as the linear share alpha grows.
template <class S>
struct EnvelopeBreak {
  S alpha;  // in (0, 1]
  int type;
  int from_action;
  int to_action;
  S slope_jump;  // weighted increase of the aggregate utility slope
  S drop_jump;   // weighted increase of the aggregate intercept drop
};

/// Piecewise-linear aggregate agent utility under linear contracts:
/// U(alpha) = sum_t w_t max_i (alpha R[t][i] - c[t][i]).  Segment s covers
/// [start[s], start[s+1]) (the last one reaches 1) and carries the aggregate
/// slope W_s = sum_t w_t R[t][choice_t] and drop D_s = sum_t w_t c[t][choice_t],
/// so U(alpha) = W_s alpha - D_s there.  Choices follow the agent's
/// tie-breaking (utility first, then principal profit), which picks the
/// larger slope when two actions tie, so segments are right-continuous and
/// (1 - alpha) W_s is exactly the principal's profit from the linear
/// contract alpha.
template <class S>
struct BasicEnvelope {
  std::vector<S> start;
  std::vector<S> slope;
  std::vector<S> drop;
  std::vector<EnvelopeBreak<S>> breaks;  // breaks[s] sits at start[s + 1]

  int segments() const { return static_cast<int>(start.size()); }

  /// Index of the segment in force at `alpha` (right-continuous).
  int segment_at(const S& alpha) const {
    const auto it = std::upper_bound(start.begin(), start.end(), alpha);
    if (it == start.begin()) return 0;
    return static_cast<int>(it - start.begin()) - 1;
  }

  S value(const S& alpha) const {
    const int s = segment_at(alpha);
    return slope[s] * alpha - drop[s];
  }

  S right_slope(const S& alpha) const { return slope[segment_at(alpha)]; }

  /// Principal profit of the linear contract `alpha`.
  S linear_profit(const S& alpha) const {
    const int s = segment_at(alpha);
    return (S(1) - alpha) * slope[s];
  }
};

using Envelope = BasicEnvelope<Rat>;

namespace detail {

template <class S>
struct TypeBreak {
  S alpha;
  int type;
  int from_action;
  int to_action;
};

/// Marches the upper envelope of the lines alpha R[t][i] - c[t][i] for one
/// type: starts from the cheapest action (largest slope on ties) and
/// repeatedly jumps to the line that takes over earliest.
template <class S>
void march_type_envelope(const BasicInstance<S>& instance, int t, const std::vector<S>& slopes,
                         int* base_action, std::vector<TypeBreak<S>>* out, const Num<S>& num) {
  const int n = instance.actions;
  const auto& costs = instance.costs[t];

  int cur = 0;
  for (int i = 1; i < n; ++i) {
    if (num.lt(costs[i], costs[cur]) ||
        (num.eq(costs[i], costs[cur]) && num.lt(slopes[cur], slopes[i]))) {
      cur = i;
    }
  }
  *base_action = cur;

  for (;;) {
    int next = -1;
    S next_alpha(0);
    for (int i = 0; i < n; ++i) {
      if (!num.lt(slopes[cur], slopes[i])) continue;
      const S cross = (costs[i] - costs[cur]) / (slopes[i] - slopes[cur]);
      if (num.lt(S(1), cross)) continue;
      if (next < 0 || num.lt(cross, next_alpha) ||
          (num.eq(cross, next_alpha) && num.lt(slopes[next], slopes[i]))) {
        next = i;
        next_alpha = cross;
      }
    }
    if (next < 0) break;
    out->push_back({next_alpha, t, cur, next});
    cur = next;
  }
}

}  // namespace detail

/// Builds the aggregate utility envelope with one break per per-type action
/// switch, sorted by (alpha, type, new action).  Coinciding alphas produce
/// zero-width segments; `segment_at` resolves them right-continuously.
template <class S>
BasicEnvelope<S> utility_envelope(const BasicInstance<S>& instance, const Num<S>& num = {}) {
  const auto expected = expected_rewards(instance);
  std::vector<detail::TypeBreak<S>> raw;
  std::vector<int> choice(instance.types, 0);
  for (int t = 0; t < instance.types; ++t) {
    int base = 0;
    detail::march_type_envelope(instance, t, expected[t], &base, &raw, num);
    choice[t] = base;
  }
  std::sort(raw.begin(), raw.end(), [&](const auto& a, const auto& b) {
    if (num.lt(a.alpha, b.alpha)) return true;
    if (num.lt(b.alpha, a.alpha)) return false;
    return std::tie(a.type, a.to_action) < std::tie(b.type, b.to_action);
  });

  BasicEnvelope<S> envelope;
  S slope(0);
  S drop(0);
  for (int t = 0; t < instance.types; ++t) {
    slope += instance.weights[t] * expected[t][choice[t]];
    drop += instance.weights[t] * instance.costs[t][choice[t]];
  }
  envelope.start.push_back(S(0));
  envelope.slope.push_back(slope);
  envelope.drop.push_back(drop);
  for (const auto& b : raw) {
    const S slope_jump =
        instance.weights[b.type] * (expected[b.type][b.to_action] - expected[b.type][b.from_action]);
    const S drop_jump =
        instance.weights[b.type] * (instance.costs[b.type][b.to_action] - instance.costs[b.type][b.from_action]);
    slope += slope_jump;
    drop += drop_jump;
    envelope.start.push_back(b.alpha);
    envelope.slope.push_back(slope);
    envelope.drop.push_back(drop);
    envelope.breaks.push_back({b.alpha, b.type, b.from_action, b.to_action, slope_jump, drop_jump});
  }
  return envelope;
}

}  // namespace contracts

#endif  // CONTRACTS_ENVELOPE_HPP
