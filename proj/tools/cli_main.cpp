// Command line front end: solve benchmark values, generate and transform
// instances, verify contracts and menus, and print benchmark gap tables.
//
// Exit codes: 0 success, 2 bad input (files, flags, malformed instances),
// 3 profile budget exceeded, 4 incentive-compatibility violation found by
// `verify`.  Internal consistency failures exit 1.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "contracts/benchmarks.hpp"
#include "contracts/errors.hpp"
#include "contracts/gaps.hpp"
#include "contracts/generators.hpp"
#include "contracts/io.hpp"

namespace {

using contracts::BasicBenchmarkResult;
using contracts::BasicContract;
using contracts::BasicInstance;
using contracts::BasicMenu;
using contracts::BenchmarkKind;
using contracts::Instance;
using contracts::InputError;
using contracts::MethodStats;
using contracts::Num;
using contracts::Rat;
using contracts::SolveOptions;

std::string double_literal(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string double_text(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

// --- scalar-dependent rendering ---------------------------------------------

template <class S>
std::string value_text(const S& value);
template <>
std::string value_text<Rat>(const Rat& value) {
  return contracts::to_fraction_string(value) + " (~" + contracts::to_decimal_string(value) +
         ")";
}
template <>
std::string value_text<double>(const double& value) {
  return double_text(value);
}

template <class S>
nlohmann::json value_json(const S& value);
template <>
nlohmann::json value_json<Rat>(const Rat& value) {
  return {{"exact", contracts::to_fraction_string(value)},
          {"decimal", contracts::to_decimal_string(value)}};
}
template <>
nlohmann::json value_json<double>(const double& value) {
  return value;
}

template <class S>
std::string pay_literal(const S& value);
template <>
std::string pay_literal<Rat>(const Rat& value) {
  return contracts::to_fraction_string(value);
}
template <>
std::string pay_literal<double>(const double& value) {
  return double_literal(value);
}

template <class S>
nlohmann::json contract_json(const BasicContract<S>& contract) {
  nlohmann::json pay = nlohmann::json::array();
  for (const S& x : contract.pay) pay.push_back(pay_literal(x));
  return {{"x", std::move(pay)}};
}

template <class S>
nlohmann::json menu_json(const BasicMenu<S>& menu) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& entry : menu.entries) {
    nlohmann::json pay = nlohmann::json::array();
    for (const S& x : entry.pay) pay.push_back(pay_literal(x));
    entries.push_back(std::move(pay));
  }
  return {{"contracts", std::move(entries)}};
}

nlohmann::json stats_json(const MethodStats& stats) {
  return {{"profiles_total", stats.profiles_total},
          {"profiles_pruned", stats.profiles_pruned},
          {"profiles_infeasible", stats.profiles_infeasible},
          {"lp_calls", stats.lp_calls},
          {"pivots", stats.pivots}};
}

std::string profile_text(const std::vector<int>& profile) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out << ", ";
    out << profile[i];
  }
  out << "]";
  return out.str();
}

// --- shared option bundles ---------------------------------------------------

struct Cli {
  // common storage
  std::string instance_path;
  std::string out_path;
  std::string witness_path;
  std::string mode = "exact";
  double tolerance = 1e-9;
  SolveOptions search;
  int exit_code = 0;

  // solve
  std::string benchmark = "all";

  // verify
  std::string contract_path;
  std::string menu_path;
  std::string profile_text_arg;

  // generate
  int gen_actions = 2;
  int gen_types = 2;
  std::string gen_lambda;
  std::string graph_path;
  int gen_k = 2;

  // transform
  std::string epsilon_text;
  std::string zeta_text;
  int expand_actions = 2;
  int expand_types = 1;

  // gaps
  bool csv = false;

  void add_mode_flags(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "Arithmetic: exact rationals or doubles")
        ->check(CLI::IsMember({"exact", "float"}))
        ->capture_default_str();
    cmd->add_option("--tolerance", tolerance, "Comparison tolerance in float mode")
        ->capture_default_str();
  }
  void add_search_flags(CLI::App* cmd) {
    cmd->add_option("--workers", search.workers, "Worker threads for profile enumeration (0 = all)")
        ->capture_default_str();
    cmd->add_option("--budget", search.budget, "Largest admissible number of action profiles")
        ->capture_default_str();
  }

  Num<double> num_double() const {
    if (tolerance <= 0) throw InputError("--tolerance must be positive");
    return Num<double>(tolerance);
  }

  void emit_instance(const Instance& instance) const {
    if (out_path.empty()) {
      std::cout << contracts::instance_to_json(instance).dump(2) << "\n";
    } else {
      contracts::save_instance(instance, out_path);
      std::cout << "wrote instance (" << instance.types << " types, " << instance.actions
                << " actions, " << instance.outcomes << " outcomes) to " << out_path << "\n";
    }
  }

  int run_solve();
  template <class S>
  void solve_with(const BasicInstance<S>& instance, const Num<S>& num);
  int run_verify();
  template <class S>
  void verify_with(const BasicInstance<S>& instance, const BasicContract<S>* contract,
                   const BasicMenu<S>* menu, const std::vector<int>* profile,
                   const Num<S>& num);
  int run_gaps();
};

// --- solve -------------------------------------------------------------------

const std::vector<std::string> kAllBenchmarks = {"welfare", "type_aware", "menu", "single",
                                                 "linear"};

template <class S>
void Cli::solve_with(const BasicInstance<S>& instance, const Num<S>& num) {
  std::vector<std::string> wanted;
  if (benchmark == "all") {
    wanted = kAllBenchmarks;
  } else {
    wanted.push_back(benchmark);
  }
  if (!witness_path.empty()) {
    if (wanted.size() != 1 || benchmark == "welfare") {
      throw InputError(
          "--witness-out needs exactly one of --benchmark linear|type_aware|single|menu");
    }
  }

  nlohmann::json results = nlohmann::json::array();
  for (const std::string& name : wanted) {
    BasicBenchmarkResult<S> result;
    if (name == "welfare") {
      result = contracts::welfare(instance, num);
    } else if (name == "linear") {
      result = contracts::opt_linear(instance, num);
    } else if (name == "type_aware") {
      result = contracts::opt_typeaware(instance, search, num);
    } else if (name == "single") {
      result = contracts::opt_single(instance, search, num);
    } else if (name == "menu") {
      result = contracts::opt_menu(instance, search, num);
    } else {
      throw InputError("unknown benchmark \"" + name + "\"");
    }

    std::cout << name << " = " << value_text(result.value) << "\n";
    if (result.alpha) std::cout << "  alpha: " << value_text(*result.alpha) << "\n";
    if (!result.action_profile.empty()) {
      std::cout << "  action profile: " << profile_text(result.action_profile) << "\n";
    }
    if (name != "welfare" && name != "linear") {
      std::cout << "  search: " << result.stats.profiles_total << " profiles ("
                << result.stats.profiles_pruned << " pruned, "
                << result.stats.profiles_infeasible << " infeasible), "
                << result.stats.lp_calls << " lp calls, " << result.stats.pivots
                << " pivots\n";
    }

    nlohmann::json entry = {{"benchmark", name}, {"value", value_json(result.value)}};
    if (result.alpha) entry["alpha"] = value_json(*result.alpha);
    if (!result.action_profile.empty()) entry["action_profile"] = result.action_profile;
    if (result.contract) entry["contract"] = contract_json(*result.contract);
    if (result.menu) entry["menu"] = menu_json(*result.menu);
    entry["stats"] = stats_json(result.stats);
    results.push_back(std::move(entry));

    if (!witness_path.empty()) {
      if (result.contract) {
        contracts::write_text_file(witness_path, contract_json(*result.contract).dump(2) + "\n");
      } else if (result.menu) {
        contracts::write_text_file(witness_path, menu_json(*result.menu).dump(2) + "\n");
      } else if (result.alpha) {
        // Materialize the linear contract alpha * rewards.
        BasicContract<S> contract;
        for (const S& r : instance.rewards) contract.pay.push_back(*result.alpha * r);
        contracts::write_text_file(witness_path, contract_json(contract).dump(2) + "\n");
      }
      std::cout << "  witness written to " << witness_path << "\n";
    }
  }

  if (!out_path.empty()) {
    nlohmann::json doc = {{"mode", mode},
                          {"instance",
                           {{"types", instance.types},
                            {"actions", instance.actions},
                            {"outcomes", instance.outcomes}}},
                          {"results", std::move(results)}};
    contracts::write_text_file(out_path, doc.dump(2) + "\n");
  }
}

int Cli::run_solve() {
  const Instance instance = contracts::load_instance(instance_path);
  if (mode == "float") {
    solve_with(contracts::to_double_instance(instance), num_double());
  } else {
    solve_with(instance, Num<Rat>{});
  }
  return 0;
}

// --- verify ------------------------------------------------------------------

std::vector<int> parse_profile_arg(const std::string& text, int types) {
  std::vector<int> profile;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      profile.push_back(value);
    } catch (const std::exception&) {
      throw InputError("--profile expects comma-separated action indices, got \"" + token +
                       "\"");
    }
  }
  if (static_cast<int>(profile.size()) != types) {
    throw InputError("--profile needs one action per type (" + std::to_string(types) +
                     " expected, " + std::to_string(profile.size()) + " given)");
  }
  return profile;
}

template <class S>
void Cli::verify_with(const BasicInstance<S>& instance, const BasicContract<S>* contract,
                      const BasicMenu<S>* menu, const std::vector<int>* profile,
                      const Num<S>& num) {
  contracts::ResponseReport<S> report;
  if (contract != nullptr) {
    report = contracts::evaluate_contract(instance, *contract, num);
  } else {
    report = contracts::evaluate_menu(instance, *menu, num);
  }

  for (int t = 0; t < instance.types; ++t) {
    const auto& choice = report.choices[t];
    std::cout << "type " << t << ": ";
    if (choice.entry >= 0) std::cout << "entry " << choice.entry << ", ";
    std::cout << "action " << choice.action << ", utility " << value_text(choice.utility)
              << ", transfer " << value_text(choice.transfer) << ", profit "
              << value_text(choice.profit) << "\n";
  }
  std::cout << "expected profit   = " << value_text(report.expected_profit) << "\n";
  std::cout << "expected transfer = " << value_text(report.expected_transfer) << "\n";
  std::cout << "expected utility  = " << value_text(report.expected_utility) << "\n";
  if (menu != nullptr) {
    std::cout << "truthful entry choice optimal: " << (report.truthful_optimal ? "yes" : "no")
              << "\n";
  }

  // Audit incentive constraints.  A single contract is audited as the menu
  // that repeats it for every type: entry constraints hold trivially and the
  // target profile check reduces to per-type action optimality.
  BasicMenu<S> audited;
  if (menu != nullptr) {
    audited = *menu;
  } else {
    audited.entries.assign(instance.types, *contract);
  }
  const auto ic = contracts::verify_ic(instance, audited, profile, num);
  nlohmann::json ic_doc = {{"ok", ic.ok}};
  ic_doc["pair_shortfalls"] = nlohmann::json::array();
  ic_doc["action_shortfalls"] = nlohmann::json::array();
  for (const auto& fail : ic.pair_shortfalls) {
    std::cout << "IC violation: type " << fail.type << " prefers entry " << fail.entry
              << " over its own (shortfall " << value_text(fail.shortfall) << ")\n";
    ic_doc["pair_shortfalls"].push_back(
        {{"type", fail.type}, {"entry", fail.entry}, {"shortfall", value_json(fail.shortfall)}});
  }
  for (const auto& fail : ic.action_shortfalls) {
    std::cout << "IC violation: type " << fail.type << " deviates from assigned action "
              << fail.action << " (shortfall " << value_text(fail.shortfall) << ")\n";
    ic_doc["action_shortfalls"].push_back(
        {{"type", fail.type}, {"action", fail.action}, {"shortfall", value_json(fail.shortfall)}});
  }
  std::cout << "incentive compatible: " << (ic.ok ? "yes" : "NO") << "\n";

  if (!out_path.empty()) {
    nlohmann::json choices = nlohmann::json::array();
    for (const auto& choice : report.choices) {
      nlohmann::json c = {{"action", choice.action},
                          {"utility", value_json(choice.utility)},
                          {"transfer", value_json(choice.transfer)},
                          {"profit", value_json(choice.profit)}};
      if (choice.entry >= 0) c["entry"] = choice.entry;
      choices.push_back(std::move(c));
    }
    nlohmann::json doc = {{"mode", mode},
                          {"expected_profit", value_json(report.expected_profit)},
                          {"expected_transfer", value_json(report.expected_transfer)},
                          {"expected_utility", value_json(report.expected_utility)},
                          {"choices", std::move(choices)},
                          {"ic", std::move(ic_doc)}};
    if (menu != nullptr) doc["truthful_optimal"] = report.truthful_optimal;
    contracts::write_text_file(out_path, doc.dump(2) + "\n");
  }
  if (!ic.ok) exit_code = 4;
}

int Cli::run_verify() {
  if (contract_path.empty() == menu_path.empty()) {
    throw InputError("verify needs exactly one of --contract or --menu");
  }
  const Instance instance = contracts::load_instance(instance_path);
  std::optional<contracts::Contract> contract;
  std::optional<contracts::Menu> menu;
  if (!contract_path.empty()) {
    contract = contracts::load_contract(contract_path, instance.outcomes);
  } else {
    menu = contracts::load_menu(menu_path, instance.types, instance.outcomes);
  }
  std::optional<std::vector<int>> profile;
  if (!profile_text_arg.empty()) {
    profile = parse_profile_arg(profile_text_arg, instance.types);
  }

  if (mode == "float") {
    const BasicInstance<double> dinstance = contracts::to_double_instance(instance);
    std::optional<BasicContract<double>> dcontract;
    std::optional<BasicMenu<double>> dmenu;
    if (contract) {
      dcontract.emplace();
      for (const Rat& x : contract->pay) dcontract->pay.push_back(x.get_d());
    }
    if (menu) {
      dmenu.emplace();
      for (const auto& entry : menu->entries) {
        BasicContract<double> e;
        for (const Rat& x : entry.pay) e.pay.push_back(x.get_d());
        dmenu->entries.push_back(std::move(e));
      }
    }
    verify_with(dinstance, dcontract ? &*dcontract : nullptr, dmenu ? &*dmenu : nullptr,
                profile ? &*profile : nullptr, num_double());
  } else {
    verify_with(instance, contract ? &*contract : nullptr, menu ? &*menu : nullptr,
                profile ? &*profile : nullptr, Num<Rat>{});
  }
  return 0;
}

// --- gaps --------------------------------------------------------------------

int Cli::run_gaps() {
  const Instance instance = contracts::load_instance(instance_path);
  const contracts::GapsReport report = contracts::gaps_table(instance, search);
  const std::string rendered = csv ? contracts::to_csv(report) : contracts::to_text(report);
  std::cout << rendered;
  if (!out_path.empty()) contracts::write_text_file(out_path, rendered);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App app{"Exact benchmarks for hidden-action, hidden-type contract design"};
  app.require_subcommand(1);

  // solve
  CLI::App* solve = app.add_subcommand("solve", "Compute benchmark values of an instance");
  solve->add_option("instance", cli.instance_path, "Instance JSON file")->required();
  solve->add_option("--benchmark", cli.benchmark,
                    "welfare, type_aware, menu, single, linear or all")
      ->check(CLI::IsMember({"welfare", "type_aware", "menu", "single", "linear", "all"}))
      ->capture_default_str();
  cli.add_mode_flags(solve);
  cli.add_search_flags(solve);
  solve->add_option("--out", cli.out_path, "Write a JSON result document here");
  solve->add_option("--witness-out", cli.witness_path,
                    "Write the optimal contract or menu here (single benchmark only)");
  solve->callback([&cli] { cli.run_solve(); });

  // generate
  CLI::App* generate = app.add_subcommand("generate", "Construct a named instance family");
  generate->require_subcommand(1);
  CLI::App* geometric =
      generate->add_subcommand("geometric", "Geometric-cost family with weak linear contracts");
  geometric->add_option("--actions", cli.gen_actions, "Costly actions")->required();
  geometric->add_option("--types", cli.gen_types, "Agent types (>= 2)")->required();
  geometric->add_option("--lambda", cli.gen_lambda, "Cost growth ratio (> types)")->required();
  geometric->add_option("--out", cli.out_path, "Instance output file");
  geometric->callback([&cli] {
    cli.emit_instance(contracts::geometric_cost_family(
        cli.gen_actions, cli.gen_types, contracts::parse_rational(cli.gen_lambda)));
  });
  CLI::App* domset =
      generate->add_subcommand("domset", "Dominating-set reduction (max degree 3)");
  domset->add_option("graph", cli.graph_path, "Graph JSON file")->required();
  domset->add_option("--out", cli.out_path, "Instance output file");
  domset->callback([&cli] {
    cli.emit_instance(contracts::dominating_set_reduction(contracts::load_graph(cli.graph_path)));
  });
  CLI::App* menu_adv =
      generate->add_subcommand("menu-advantage", "Family where menus beat single contracts");
  menu_adv->add_option("--k", cli.gen_k, "Informed types (>= 2)")->required();
  menu_adv->add_option("--out", cli.out_path, "Instance output file");
  menu_adv->callback([&cli] { cli.emit_instance(contracts::menu_advantage_family(cli.gen_k)); });

  // transform
  CLI::App* transform = app.add_subcommand("transform", "Rewrite an instance");
  transform->require_subcommand(1);
  CLI::App* nonlinear = transform->add_subcommand(
      "nonlinear", "Add outcomes so the best single contract reaches full welfare");
  nonlinear->add_option("instance", cli.instance_path, "Instance JSON file")->required();
  nonlinear->add_option("--out", cli.out_path, "Instance output file");
  nonlinear->callback([&cli] {
    cli.emit_instance(
        contracts::nonlinear_advantage_transform(contracts::load_instance(cli.instance_path)));
  });
  CLI::App* reveal = transform->add_subcommand(
      "type-reveal", "Append a type-revealing signal and a noise type");
  reveal->add_option("instance", cli.instance_path, "Instance JSON file")->required();
  CLI::Option* eps_opt =
      reveal->add_option("--epsilon", cli.epsilon_text, "Signal probability in (0, 1/2]");
  reveal->add_option("--zeta", cli.zeta_text, "Pick epsilon so menu/single move by < zeta")
      ->excludes(eps_opt);
  cli.add_search_flags(reveal);
  reveal->add_option("--out", cli.out_path, "Instance output file");
  reveal->callback([&cli] {
    const Instance instance = contracts::load_instance(cli.instance_path);
    if (cli.epsilon_text.empty() == cli.zeta_text.empty()) {
      throw InputError("type-reveal needs exactly one of --epsilon or --zeta");
    }
    if (!cli.epsilon_text.empty()) {
      cli.emit_instance(contracts::type_reveal_transform(
          instance, contracts::parse_rational(cli.epsilon_text)));
    } else {
      cli.emit_instance(contracts::type_reveal_transform_for_slack(
          instance, contracts::parse_rational(cli.zeta_text), cli.search));
    }
  });
  CLI::App* collapse = transform->add_subcommand(
      "collapse", "Envelope-equivalent single-type two-outcome instance");
  collapse->add_option("instance", cli.instance_path, "Instance JSON file")->required();
  collapse->add_option("--out", cli.out_path, "Instance output file");
  collapse->callback([&cli] {
    cli.emit_instance(contracts::collapse_to_standard(contracts::load_instance(cli.instance_path)));
  });
  CLI::App* expand = transform->add_subcommand(
      "expand", "Spread a standard instance over several uniform types");
  expand->add_option("instance", cli.instance_path, "Instance JSON file")->required();
  expand->add_option("--actions", cli.expand_actions, "Actions per type")->required();
  expand->add_option("--types", cli.expand_types, "Types")->required();
  expand->add_option("--out", cli.out_path, "Instance output file");
  expand->callback([&cli] {
    cli.emit_instance(contracts::expand_to_typed(contracts::load_instance(cli.instance_path),
                                                 cli.expand_actions, cli.expand_types));
  });
  CLI::App* uniformize = transform->add_subcommand(
      "uniformize", "Benchmark-preserving shared-cost rewrite");
  uniformize->add_option("instance", cli.instance_path, "Instance JSON file")->required();
  uniformize->add_option("--out", cli.out_path, "Instance output file");
  uniformize->callback([&cli] {
    cli.emit_instance(contracts::uniformize_costs(contracts::load_instance(cli.instance_path)));
  });

  // verify
  CLI::App* verify = app.add_subcommand("verify", "Evaluate and audit a contract or menu");
  verify->add_option("instance", cli.instance_path, "Instance JSON file")->required();
  verify->add_option("--contract", cli.contract_path, "Contract JSON file");
  verify->add_option("--menu", cli.menu_path, "Menu JSON file");
  verify->add_option("--profile", cli.profile_text_arg,
                     "Comma-separated target action per type, e.g. 0,2,1");
  cli.add_mode_flags(verify);
  verify->add_option("--out", cli.out_path, "Write a JSON report here");
  verify->callback([&cli] { cli.run_verify(); });

  // gaps
  CLI::App* gaps = app.add_subcommand("gaps", "All five benchmarks and their pairwise ratios");
  gaps->add_option("instance", cli.instance_path, "Instance JSON file")->required();
  gaps->add_flag("--csv", cli.csv, "Emit CSV instead of the text table");
  cli.add_search_flags(gaps);
  gaps->add_option("--out", cli.out_path, "Also write the rendering here");
  gaps->callback([&cli] { cli.run_gaps(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const contracts::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const contracts::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const contracts::Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return cli.exit_code;
}
