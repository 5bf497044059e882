#ifndef CONTRACTS_RESPONSE_HPP
#define CONTRACTS_RESPONSE_HPP

#include <string>
#include <vector>

#include "contracts/errors.hpp"
#include "contracts/instance.hpp"
#include "contracts/scalar.hpp"

namespace contracts {

/// Outcome-contingent payment vector, one entry per outcome, nonnegative
/// (limited liability).
template <class S>
struct BasicContract {
  std::vector<S> pay;
};

/// One contract per type; the agent self-selects an entry.
template <class S>
struct BasicMenu {
  std::vector<BasicContract<S>> entries;
};

using Contract = BasicContract<Rat>;
using Menu = BasicMenu<Rat>;

/// The action (and, for menus, the entry) an agent type settles on.
/// Ties in utility are broken in favor of the principal's expected profit,
/// then by lowest (entry, action) index, so evaluation is deterministic and
/// matches the optimizers' witnesses.
template <class S>
struct TypeChoice {
  int entry = -1;  // -1 when a single contract is evaluated
  int action = 0;
  S utility{};
  S transfer{};  // expected payment to the agent
  S profit{};    // principal's expected reward minus transfer
  bool truthful = true;
};

template <class S>
struct ResponseReport {
  std::vector<TypeChoice<S>> choices;  // one per type
  S expected_profit{};
  S expected_transfer{};
  S expected_utility{};
  bool truthful_optimal = true;  // menus: every type has its own entry among optima
};

/// Incentive-compatibility audit of a menu.  `pair_shortfalls` lists type
/// pairs where some other entry beats the type's own entry; `shortfall` is
/// the (negative) gap own-utility minus best-other-utility.
/// `action_shortfalls` appears when a target action profile is supplied and
/// lists types whose assigned action is not utility-optimal under their own
/// entry.
template <class S>
struct IcReport {
  bool ok = true;
  struct PairShortfall {
    int type;
    int entry;
    S shortfall;
  };
  struct ActionShortfall {
    int type;
    int action;
    S shortfall;
  };
  std::vector<PairShortfall> pair_shortfalls;
  std::vector<ActionShortfall> action_shortfalls;
};

/// Throws InputError unless the contract has one nonnegative payment per
/// outcome.
template <class S>
void validate_contract(const BasicInstance<S>& instance, const BasicContract<S>& contract,
                       const Num<S>& num = {});

template <class S>
void validate_menu(const BasicInstance<S>& instance, const BasicMenu<S>& menu,
                   const Num<S>& num = {});

/// Expected utility of one (type, action) under a payment vector.
template <class S>
S action_utility(const BasicInstance<S>& instance, int t, int i, const std::vector<S>& pay);

/// Expected principal profit of one (type, action) under a payment vector.
template <class S>
S action_profit(const BasicInstance<S>& instance, int t, int i, const std::vector<S>& pay);

/// The agent's chosen action for one type under a single contract.
template <class S>
TypeChoice<S> best_response(const BasicInstance<S>& instance, int t,
                            const BasicContract<S>& contract, const Num<S>& num = {});

/// Aggregates best responses over the type distribution.
template <class S>
ResponseReport<S> evaluate_contract(const BasicInstance<S>& instance,
                                    const BasicContract<S>& contract, const Num<S>& num = {});

/// Each type picks the (entry, action) pair maximizing its utility over the
/// whole menu; the menu need not be incentive compatible.
template <class S>
ResponseReport<S> evaluate_menu(const BasicInstance<S>& instance, const BasicMenu<S>& menu,
                                const Num<S>& num = {});

/// Evaluates the linear contract paying alpha * rewards[j] on outcome j.
template <class S>
ResponseReport<S> evaluate_linear(const BasicInstance<S>& instance, const S& alpha,
                                  const Num<S>& num = {});

/// Audits the menu's incentive constraints; optionally also checks that
/// `target_profile` (one action per type) is utility-optimal under each
/// type's own entry.
template <class S>
IcReport<S> verify_ic(const BasicInstance<S>& instance, const BasicMenu<S>& menu,
                      const std::vector<int>* target_profile = nullptr, const Num<S>& num = {});

// ---------------------------------------------------------------------------

template <class S>
void validate_contract(const BasicInstance<S>& instance, const BasicContract<S>& contract,
                       const Num<S>& num) {
  if (static_cast<int>(contract.pay.size()) != instance.outcomes) {
    throw InputError("contract has " + std::to_string(contract.pay.size()) +
                     " payments, expected one per outcome (" +
                     std::to_string(instance.outcomes) + ")");
  }
  for (std::size_t j = 0; j < contract.pay.size(); ++j) {
    if (num.sgn(contract.pay[j]) < 0) {
      throw InputError("contract payment x[" + std::to_string(j) + "] is negative");
    }
  }
}

template <class S>
void validate_menu(const BasicInstance<S>& instance, const BasicMenu<S>& menu,
                   const Num<S>& num) {
  if (static_cast<int>(menu.entries.size()) != instance.types) {
    throw InputError("menu has " + std::to_string(menu.entries.size()) +
                     " contracts, expected one per type (" + std::to_string(instance.types) +
                     ")");
  }
  for (const auto& entry : menu.entries) validate_contract(instance, entry, num);
}

template <class S>
S action_utility(const BasicInstance<S>& instance, int t, int i, const std::vector<S>& pay) {
  S transfer(0);
  for (int j = 0; j < instance.outcomes; ++j) {
    transfer += instance.forecasts[t][i][j] * pay[j];
  }
  return transfer - instance.costs[t][i];
}

template <class S>
S action_profit(const BasicInstance<S>& instance, int t, int i, const std::vector<S>& pay) {
  S profit(0);
  for (int j = 0; j < instance.outcomes; ++j) {
    profit += instance.forecasts[t][i][j] * (instance.rewards[j] - pay[j]);
  }
  return profit;
}

namespace detail {

/// Scans (entry, action) candidates in index order and keeps the first
/// maximizer of (utility, then profit).
template <class S>
struct ChoiceAccumulator {
  const Num<S>& num;
  bool have = false;
  TypeChoice<S> best{};

  explicit ChoiceAccumulator(const Num<S>& n) : num(n) {}

  void offer(int entry, int action, const S& utility, const S& transfer, const S& profit) {
    if (!have || num.lt(best.utility, utility) ||
        (num.eq(best.utility, utility) && num.lt(best.profit, profit))) {
      best.entry = entry;
      best.action = action;
      best.utility = utility;
      best.transfer = transfer;
      best.profit = profit;
      have = true;
    }
  }
};

}  // namespace detail

template <class S>
TypeChoice<S> best_response(const BasicInstance<S>& instance, int t,
                            const BasicContract<S>& contract, const Num<S>& num) {
  detail::ChoiceAccumulator<S> acc(num);
  for (int i = 0; i < instance.actions; ++i) {
    S transfer(0);
    for (int j = 0; j < instance.outcomes; ++j) {
      transfer += instance.forecasts[t][i][j] * contract.pay[j];
    }
    const S utility = transfer - instance.costs[t][i];
    S reward(0);
    for (int j = 0; j < instance.outcomes; ++j) {
      reward += instance.forecasts[t][i][j] * instance.rewards[j];
    }
    acc.offer(-1, i, utility, transfer, reward - transfer);
  }
  return acc.best;
}

namespace detail {

template <class S>
ResponseReport<S> aggregate_choices(const BasicInstance<S>& instance,
                                    std::vector<TypeChoice<S>> choices) {
  ResponseReport<S> report;
  report.expected_profit = S(0);
  report.expected_transfer = S(0);
  report.expected_utility = S(0);
  for (int t = 0; t < instance.types; ++t) {
    report.expected_profit += instance.weights[t] * choices[t].profit;
    report.expected_transfer += instance.weights[t] * choices[t].transfer;
    report.expected_utility += instance.weights[t] * choices[t].utility;
    report.truthful_optimal = report.truthful_optimal && choices[t].truthful;
  }
  report.choices = std::move(choices);
  return report;
}

}  // namespace detail

template <class S>
ResponseReport<S> evaluate_contract(const BasicInstance<S>& instance,
                                    const BasicContract<S>& contract, const Num<S>& num) {
  validate_contract(instance, contract, num);
  std::vector<TypeChoice<S>> choices;
  choices.reserve(instance.types);
  for (int t = 0; t < instance.types; ++t) {
    choices.push_back(best_response(instance, t, contract, num));
  }
  return detail::aggregate_choices(instance, std::move(choices));
}

template <class S>
ResponseReport<S> evaluate_menu(const BasicInstance<S>& instance, const BasicMenu<S>& menu,
                                const Num<S>& num) {
  validate_menu(instance, menu, num);
  std::vector<TypeChoice<S>> choices;
  choices.reserve(instance.types);
  for (int t = 0; t < instance.types; ++t) {
    detail::ChoiceAccumulator<S> acc(num);
    S own_best_utility(0);
    bool own_seen = false;
    for (int e = 0; e < static_cast<int>(menu.entries.size()); ++e) {
      const auto& pay = menu.entries[e].pay;
      for (int i = 0; i < instance.actions; ++i) {
        S transfer(0);
        for (int j = 0; j < instance.outcomes; ++j) {
          transfer += instance.forecasts[t][i][j] * pay[j];
        }
        const S utility = transfer - instance.costs[t][i];
        S reward(0);
        for (int j = 0; j < instance.outcomes; ++j) {
          reward += instance.forecasts[t][i][j] * instance.rewards[j];
        }
        acc.offer(e, i, utility, transfer, reward - transfer);
        if (e == t && (!own_seen || num.lt(own_best_utility, utility))) {
          own_best_utility = utility;
          own_seen = true;
        }
      }
    }
    acc.best.truthful = own_seen && !num.lt(own_best_utility, acc.best.utility);
    choices.push_back(acc.best);
  }
  return detail::aggregate_choices(instance, std::move(choices));
}

template <class S>
ResponseReport<S> evaluate_linear(const BasicInstance<S>& instance, const S& alpha,
                                  const Num<S>& num) {
  BasicContract<S> contract;
  contract.pay.reserve(instance.outcomes);
  for (int j = 0; j < instance.outcomes; ++j) {
    contract.pay.push_back(alpha * instance.rewards[j]);
  }
  return evaluate_contract(instance, contract, num);
}

template <class S>
IcReport<S> verify_ic(const BasicInstance<S>& instance, const BasicMenu<S>& menu,
                      const std::vector<int>* target_profile, const Num<S>& num) {
  validate_menu(instance, menu, num);
  IcReport<S> report;
  const int T = instance.types;
  // best_utility[t][e]: type t's best achievable utility under entry e.
  std::vector<std::vector<S>> best_utility(T, std::vector<S>(T, S(0)));
  for (int t = 0; t < T; ++t) {
    for (int e = 0; e < T; ++e) {
      S best = action_utility(instance, t, 0, menu.entries[e].pay);
      for (int i = 1; i < instance.actions; ++i) {
        const S u = action_utility(instance, t, i, menu.entries[e].pay);
        if (num.lt(best, u)) best = u;
      }
      best_utility[t][e] = best;
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int e = 0; e < T; ++e) {
      if (e == t) continue;
      if (num.lt(best_utility[t][t], best_utility[t][e])) {
        report.pair_shortfalls.push_back({t, e, best_utility[t][t] - best_utility[t][e]});
        report.ok = false;
      }
    }
  }
  if (target_profile != nullptr) {
    if (static_cast<int>(target_profile->size()) != T) {
      throw InputError("target profile must assign one action per type");
    }
    for (int t = 0; t < T; ++t) {
      const int a = (*target_profile)[t];
      if (a < 0 || a >= instance.actions) {
        throw InputError("target profile action out of range for type " + std::to_string(t));
      }
      const S u = action_utility(instance, t, a, menu.entries[t].pay);
      if (num.lt(u, best_utility[t][t])) {
        report.action_shortfalls.push_back({t, a, u - best_utility[t][t]});
        report.ok = false;
      }
    }
  }
  return report;
}

}  // namespace contracts

#endif  // CONTRACTS_RESPONSE_HPP
