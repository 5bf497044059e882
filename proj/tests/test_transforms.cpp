#include <random>
#include <vector>

#include <doctest.h>

#include "contracts/benchmarks.hpp"
#include "contracts/envelope.hpp"
#include "contracts/errors.hpp"
#include "contracts/generators.hpp"
#include "contracts/instance.hpp"
#include "support/random_instances.hpp"

using namespace contracts;
using testing::RandomSpec;

namespace {

/// Compares two utility envelopes pointwise on a lattice plus both segment
/// start sets.
void check_same_curve(const Envelope& a, const Envelope& b) {
  std::vector<Rat> grid;
  for (int k = 0; k <= 31; ++k) grid.push_back(make_rat(k, 31));
  for (const Rat& s : a.start) grid.push_back(s);
  for (const Rat& s : b.start) grid.push_back(s);
  for (const Rat& alpha : grid) {
    CAPTURE(to_fraction_string(alpha));
    CHECK(a.value(alpha) == b.value(alpha));
    CHECK(a.linear_profit(alpha) == b.linear_profit(alpha));
  }
}

}  // namespace

TEST_CASE("nonlinear advantage: single contracts reach first-best") {
  std::mt19937_64 rng(9301);
  for (int round = 0; round < 15; ++round) {
    RandomSpec spec;
    spec.types = 1 + static_cast<int>(rng() % 3);
    spec.actions = 2 + static_cast<int>(rng() % 2);
    spec.outcomes = 2 + static_cast<int>(rng() % 2);
    spec.typed_costs = (round % 2) == 1;
    const auto base = testing::random_instance(rng, spec);
    const auto out = nonlinear_advantage_transform(base);
    CAPTURE(round);

    CHECK(out.types == base.types);
    CHECK(out.actions == base.actions);
    CHECK(out.outcomes == base.outcomes + 2);
    for (int j = 1; j < out.outcomes; ++j) CHECK(out.rewards[j - 1] <= out.rewards[j]);

    const Rat base_welfare = welfare(base).value;
    CHECK(welfare(out).value == base_welfare);
    CHECK(opt_linear(out).value == opt_linear(base).value);
    CHECK(opt_single(out).value == base_welfare);
    // The chain is squeezed from both ends.
    CHECK(opt_menu(out).value == base_welfare);
    CHECK(opt_typeaware(out).value == base_welfare);
  }
}

TEST_CASE("nonlinear advantage: provenance and the degenerate flag") {
  const auto base = geometric_cost_family(2, 2, Rat(100));
  const auto out = nonlinear_advantage_transform(base);
  REQUIRE(out.provenance.contains("transforms"));
  REQUIRE(out.provenance["transforms"].size() == 1);
  const auto& note = out.provenance["transforms"][0];
  CHECK(note.at("transform") == "nonlinear_advantage_transform");
  CHECK(note.at("degenerate") == false);
  CHECK(out.provenance.at("generator") == "geometric_cost_family");

  // All-free actions make the pivot costless and the transform degenerate.
  const auto trivial = make_shared_cost_instance(
      {Rat(0), Rat(0)}, {Rat(0), Rat(1)},
      {{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}});
  const auto flagged = nonlinear_advantage_transform(trivial);
  CHECK(flagged.provenance["transforms"][0].at("degenerate") == true);
  CHECK(welfare(flagged).value == welfare(trivial).value);
  CHECK(opt_single(flagged).value == welfare(trivial).value);
}

TEST_CASE("type reveal: exact rescaling of welfare, type-aware and linear") {
  std::mt19937_64 rng(9302);
  const Rat epsilon(1, 4);
  for (int round = 0; round < 12; ++round) {
    RandomSpec spec;
    spec.types = 1 + static_cast<int>(rng() % 3);
    spec.typed_costs = (round % 2) == 1;
    const auto base = testing::random_instance(rng, spec);
    const auto out = type_reveal_transform(base, epsilon);
    CAPTURE(round);

    CHECK(out.types == base.types + 1);
    CHECK(out.outcomes == base.outcomes + 2);
    CHECK(out.weights.back() == Rat(1, base.types + 1));

    const Rat shrink = Rat(base.types) / (base.types + 1);
    CHECK(welfare(out).value == shrink * welfare(base).value);
    // The signal outcome lets a type-aware principal implement each type's
    // surplus-maximizing action at cost, so type-aware rises to full welfare.
    CHECK(opt_typeaware(out).value == shrink * welfare(base).value);
    CHECK(opt_linear(out).value == shrink * opt_linear(base).value);
  }
}

TEST_CASE("type reveal: epsilon range and provenance") {
  const auto base = menu_advantage_family(2);
  CHECK_THROWS_WITH_AS(type_reveal_transform(base, Rat(0)),
                       doctest::Contains("epsilon in (0, 1/2]"), InputError);
  CHECK_THROWS_WITH_AS(type_reveal_transform(base, Rat(-1, 4)),
                       doctest::Contains("epsilon in (0, 1/2]"), InputError);
  CHECK_THROWS_WITH_AS(type_reveal_transform(base, Rat(2, 3)),
                       doctest::Contains("epsilon in (0, 1/2]"), InputError);
  const auto out = type_reveal_transform(base, Rat(1, 2));
  const auto& note = out.provenance["transforms"].back();
  CHECK(note.at("transform") == "type_reveal_transform");
  CHECK(note.at("epsilon") == "1/2");
}

TEST_CASE("type reveal for slack: menu and single move by at most zeta") {
  std::mt19937_64 rng(9303);
  const Rat zeta(1, 100);
  for (int round = 0; round < 6; ++round) {
    RandomSpec spec;
    spec.types = 2;
    spec.actions = 2 + static_cast<int>(rng() % 2);
    spec.outcomes = 2;
    const auto base = testing::random_instance(rng, spec);
    const auto out = type_reveal_transform_for_slack(base, zeta);
    CAPTURE(round);

    const Rat shrink = Rat(base.types) / (base.types + 1);
    const auto close = [&](const Rat& now, const Rat& before) {
      const Rat diff = now - shrink * before;
      return (diff >= 0 ? diff : -diff) <= zeta;
    };
    CHECK(close(opt_single(out).value, opt_single(base).value));
    CHECK(close(opt_menu(out).value, opt_menu(base).value));
    CHECK(out.provenance["transforms"].back().at("zeta") == "1/100");
  }

  CHECK_THROWS_WITH_AS(type_reveal_transform_for_slack(menu_advantage_family(2), Rat(0)),
                       doctest::Contains("zeta > 0"), InputError);
}

TEST_CASE("type reveal for slack: value-free instances still transform") {
  const auto flat = make_shared_cost_instance({Rat(0)}, {Rat(0), Rat(1)},
                                              {{{Rat(1), Rat(0)}}, {{Rat(1), Rat(0)}}});
  const auto out = type_reveal_transform_for_slack(flat, Rat(1, 10));
  CHECK(out.types == 3);
  CHECK(welfare(out).value == Rat(0));
  CHECK(out.provenance["transforms"].back().at("epsilon") == "1/2");
}

TEST_CASE("collapse to standard: same curve, one type, two outcomes") {
  std::mt19937_64 rng(9304);
  for (int round = 0; round < 15; ++round) {
    RandomSpec spec;
    spec.types = 1 + static_cast<int>(rng() % 3);
    spec.actions = 2 + static_cast<int>(rng() % 3);
    spec.typed_costs = (round % 2) == 1;
    const auto base = testing::random_instance(rng, spec);
    const auto out = collapse_to_standard(base);
    CAPTURE(round);

    CHECK(out.types == 1);
    CHECK(out.outcomes == 2);
    check_same_curve(utility_envelope(base), utility_envelope(out));
    CHECK(welfare(out).value == welfare(base).value);
    const auto lin_base = opt_linear(base);
    const auto lin_out = opt_linear(out);
    CHECK(lin_out.value == lin_base.value);
    CHECK(*lin_out.alpha == *lin_base.alpha);
  }
}

TEST_CASE("collapse to standard: worthless instances become the null instance") {
  const auto flat = make_shared_cost_instance({Rat(0), Rat(1, 2)}, {Rat(0), Rat(0)},
                                              {{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}});
  const auto out = collapse_to_standard(flat);
  CHECK(out.types == 1);
  CHECK(out.actions == 1);
  CHECK(out.rewards == std::vector<Rat>{Rat(0), Rat(0)});
  CHECK(welfare(out).value == Rat(0));
}

TEST_CASE("expand to typed: splits of the break count round trip") {
  std::mt19937_64 rng(9305);
  for (int round = 0; round < 12; ++round) {
    RandomSpec spec;
    spec.types = 1 + static_cast<int>(rng() % 2);
    spec.actions = 2 + static_cast<int>(rng() % 3);
    spec.distinct_costs = true;
    const auto standard = collapse_to_standard(testing::random_instance(rng, spec));
    const auto envelope = utility_envelope(standard);
    const int breaks = static_cast<int>(envelope.breaks.size());
    CAPTURE(round);
    CAPTURE(breaks);

    std::vector<std::pair<int, int>> splits{{breaks + 1, 1}};
    if (breaks >= 1) splits.push_back({2, breaks});
    if (breaks >= 2 && breaks % 2 == 0) splits.push_back({breaks / 2 + 1, 2});
    for (const auto& [actions, types] : splits) {
      CAPTURE(actions);
      CAPTURE(types);
      const auto expanded = expand_to_typed(standard, actions, types);
      CHECK(expanded.types == types);
      CHECK(expanded.actions == actions);
      CHECK_FALSE(expanded.shared_costs);
      check_same_curve(envelope, utility_envelope(expanded));
      CHECK(welfare(expanded).value == welfare(standard).value);
      CHECK(opt_linear(expanded).value == opt_linear(standard).value);
    }
  }
}

TEST_CASE("expand to typed: input validation") {
  // One type, two outcomes, breaks at 1/2 and 5/8.
  const auto standard = make_shared_cost_instance(
      {Rat(0), Rat(1, 4), Rat(1, 2)}, {Rat(0), Rat(1)},
      {{{Rat(1), Rat(0)}, {Rat(1, 2), Rat(1, 2)}, {Rat(1, 10), Rat(9, 10)}}});
  REQUIRE(utility_envelope(standard).breaks.size() == 2);

  CHECK_NOTHROW(expand_to_typed(standard, 3, 1));
  CHECK_NOTHROW(expand_to_typed(standard, 2, 2));
  CHECK_THROWS_WITH_AS(expand_to_typed(standard, 2, 1),
                       doctest::Contains("envelope breaks"), InputError);
  CHECK_THROWS_WITH_AS(expand_to_typed(standard, 0, 1),
                       doctest::Contains("positive dimensions"), InputError);

  const auto two_types = make_shared_cost_instance(
      {Rat(0)}, {Rat(0), Rat(1)}, {{{Rat(1), Rat(0)}}, {{Rat(1), Rat(0)}}});
  CHECK_THROWS_WITH_AS(expand_to_typed(two_types, 1, 1),
                       doctest::Contains("single-type instance with two outcomes"), InputError);
  const auto three_outcomes = make_shared_cost_instance(
      {Rat(0)}, {Rat(0), Rat(1), Rat(2)}, {{{Rat(1), Rat(0), Rat(0)}}});
  CHECK_THROWS_WITH_AS(expand_to_typed(three_outcomes, 1, 1),
                       doctest::Contains("single-type instance with two outcomes"), InputError);
}

TEST_CASE("uniformize costs: every benchmark survives the shared schedule") {
  std::mt19937_64 rng(9306);
  for (int round = 0; round < 10; ++round) {
    RandomSpec spec;
    spec.types = 2 + static_cast<int>(rng() % 2);
    spec.actions = 2 + static_cast<int>(rng() % 2);
    spec.typed_costs = true;
    const auto base = testing::random_instance(rng, spec);
    const auto out = uniformize_costs(base);
    CAPTURE(round);

    CHECK(out.shared_costs);
    CHECK(out.types == base.types);
    CHECK(out.actions >= base.actions);
    for (int i = 1; i < out.actions; ++i) CHECK(out.costs[0][i - 1] <= out.costs[0][i]);

    // Every original (cost, forecast) pair survives under the shared schedule.
    for (int t = 0; t < base.types; ++t) {
      for (int i = 0; i < base.actions; ++i) {
        bool found = false;
        for (int k = 0; k < out.actions && !found; ++k) {
          found = out.costs[0][k] == base.costs[t][i] &&
                  out.forecasts[t][k] == base.forecasts[t][i];
        }
        CHECK(found);
      }
    }

    CHECK(welfare(out).value == welfare(base).value);
    CHECK(opt_typeaware(out).value == opt_typeaware(base).value);
    CHECK(opt_menu(out).value == opt_menu(base).value);
    CHECK(opt_single(out).value == opt_single(base).value);
    CHECK(opt_linear(out).value == opt_linear(base).value);

    const auto& note = out.provenance["transforms"].back();
    CHECK(note.at("transform") == "uniformize_costs");
    CHECK(note.at("source_actions") == base.actions);
    CHECK(note.at("actions") == out.actions);
  }
}

TEST_CASE("uniformize costs: shared instances pass through unchanged") {
  std::mt19937_64 rng(9307);
  const auto base = testing::random_instance(rng);
  const auto out = uniformize_costs(base);
  CHECK(out.actions == base.actions);
  CHECK(out.costs[0] == base.costs[0]);
  CHECK(out.forecasts == base.forecasts);
  CHECK(opt_single(out).value == opt_single(base).value);
}
