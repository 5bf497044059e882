#include "contracts/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "contracts/errors.hpp"
#include "contracts/rational.hpp"

namespace contracts {

namespace {

/// SAX handler mirroring the document into a json tree with every numeric
/// token replaced by its literal text.  "0.1" then reaches parse_rational as
/// written instead of as the nearest double.
class ExactNumberHandler : public nlohmann::json::json_sax_t {
 public:
  nlohmann::json root;

  bool null() override {
    place(nlohmann::json(nullptr));
    return true;
  }
  bool boolean(bool value) override {
    place(nlohmann::json(value));
    return true;
  }
  bool number_integer(number_integer_t value) override {
    place(nlohmann::json(std::to_string(value)));
    return true;
  }
  bool number_unsigned(number_unsigned_t value) override {
    place(nlohmann::json(std::to_string(value)));
    return true;
  }
  bool number_float(number_float_t, const string_t& text) override {
    place(nlohmann::json(text));
    return true;
  }
  bool string(string_t& value) override {
    place(nlohmann::json(std::move(value)));
    return true;
  }
  bool binary(binary_t& value) override {
    place(nlohmann::json(std::move(value)));
    return true;
  }
  bool start_object(std::size_t) override {
    open(nlohmann::json::object());
    return true;
  }
  bool key(string_t& value) override {
    key_ = std::move(value);
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    open(nlohmann::json::array());
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    return true;
  }
  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::json::exception& ex) override {
    throw InputError("malformed JSON at byte " + std::to_string(position) + ": " + ex.what());
  }

 private:
  // Each stack entry is the most recently inserted child of the entry below
  // it, and containers only grow while on top, so the pointers stay valid.
  nlohmann::json& place(nlohmann::json&& value) {
    if (stack_.empty()) {
      root = std::move(value);
      return root;
    }
    nlohmann::json& top = *stack_.back();
    if (top.is_object()) {
      return top[key_] = std::move(value);
    }
    top.push_back(std::move(value));
    return top.back();
  }

  void open(nlohmann::json&& container) { stack_.push_back(&place(std::move(container))); }

  std::vector<nlohmann::json*> stack_;
  std::string key_;
};

Rat rat_field(const nlohmann::json& node, const std::string& where) {
  if (node.is_string()) {
    try {
      return parse_rational(node.get<std::string>());
    } catch (const InputError& ex) {
      throw InputError(where + ": " + ex.what());
    }
  }
  if (node.is_number_unsigned()) {
    return Rat(mpz_class(node.get<std::uint64_t>()));
  }
  if (node.is_number_integer()) {
    return Rat(mpz_class(static_cast<long>(node.get<std::int64_t>())));
  }
  if (node.is_number_float()) {
    return rat_from_double(node.get<double>());
  }
  throw InputError(where + ": expected a number or numeric string");
}

long int_field(const nlohmann::json& node, const std::string& where) {
  const Rat value = rat_field(node, where);
  if (value.get_den() != 1) {
    throw InputError(where + ": expected an integer, got " + to_fraction_string(value));
  }
  if (!value.get_num().fits_slong_p()) {
    throw InputError(where + ": integer out of range");
  }
  return value.get_num().get_si();
}

const nlohmann::json& field(const nlohmann::json& object, const std::string& name) {
  const auto it = object.find(name);
  if (it == object.end()) {
    throw InputError("missing field \"" + name + "\"");
  }
  return *it;
}

int dim_field(const nlohmann::json& object, const std::string& name) {
  const long value = int_field(field(object, name), name);
  if (value < 1 || value > 1000000) {
    throw InputError(name + " must be a positive integer (got " + std::to_string(value) + ")");
  }
  return static_cast<int>(value);
}

std::vector<Rat> rat_vector(const nlohmann::json& node, std::size_t expected,
                            const std::string& where) {
  if (!node.is_array()) {
    throw InputError(where + ": expected an array");
  }
  if (node.size() != expected) {
    throw InputError(where + ": expected " + std::to_string(expected) + " entries, got " +
                     std::to_string(node.size()));
  }
  std::vector<Rat> out;
  out.reserve(node.size());
  for (std::size_t k = 0; k < node.size(); ++k) {
    out.push_back(rat_field(node[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

void reject_unknown_fields(const nlohmann::json& object,
                           std::initializer_list<const char*> known, const char* what) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* name) { return it.key() == name; });
    if (!ok) {
      throw InputError(std::string("unknown field \"") + it.key() + "\" in " + what);
    }
  }
}

std::vector<int> sorting_permutation(const std::vector<Rat>& keys) {
  std::vector<int> perm(keys.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  return perm;
}

bool is_identity(const std::vector<int>& perm) {
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] != static_cast<int>(k)) return false;
  }
  return true;
}

template <class T>
std::vector<T> apply_permutation(const std::vector<T>& values, const std::vector<int>& perm) {
  std::vector<T> out;
  out.reserve(values.size());
  for (const int k : perm) out.push_back(values[k]);
  return out;
}

nlohmann::json fraction_array(const std::vector<Rat>& values) {
  nlohmann::json out = nlohmann::json::array();
  for (const Rat& value : values) out.push_back(to_fraction_string(value));
  return out;
}

/// Payment vector from a JSON array; enforces limited liability.
std::vector<Rat> payment_vector(const nlohmann::json& node, int outcomes,
                                const std::string& where) {
  std::vector<Rat> pay = rat_vector(node, static_cast<std::size_t>(outcomes), where);
  for (std::size_t j = 0; j < pay.size(); ++j) {
    if (rat_sgn(pay[j]) < 0) {
      throw InputError(where + "[" + std::to_string(j) + "]: payments must be nonnegative, got " +
                       to_fraction_string(pay[j]));
    }
  }
  return pay;
}

}  // namespace

nlohmann::json parse_json_exact(const std::string& text) {
  ExactNumberHandler handler;
  if (!nlohmann::json::sax_parse(text, &handler)) {
    throw InputError("malformed JSON");
  }
  return std::move(handler.root);
}

Instance instance_from_json(const nlohmann::json& exact_json) {
  if (!exact_json.is_object()) {
    throw InputError("instance file must be a JSON object");
  }
  reject_unknown_fields(exact_json,
                        {"types", "actions", "outcomes", "costs", "costs_per_type", "rewards",
                         "type_weights", "forecasts", "provenance"},
                        "instance file");

  Instance instance;
  instance.types = dim_field(exact_json, "types");
  instance.actions = dim_field(exact_json, "actions");
  instance.outcomes = dim_field(exact_json, "outcomes");

  const bool has_shared = exact_json.contains("costs");
  const bool has_typed = exact_json.contains("costs_per_type");
  if (has_shared == has_typed) {
    throw InputError("provide exactly one of \"costs\" and \"costs_per_type\"");
  }
  instance.shared_costs = has_shared;
  if (has_shared) {
    const std::vector<Rat> shared =
        rat_vector(field(exact_json, "costs"), instance.actions, "costs");
    instance.costs.assign(instance.types, shared);
  } else {
    const nlohmann::json& node = field(exact_json, "costs_per_type");
    if (!node.is_array() || node.size() != static_cast<std::size_t>(instance.types)) {
      throw InputError("costs_per_type: expected one row of " +
                       std::to_string(instance.actions) + " costs per type");
    }
    for (int t = 0; t < instance.types; ++t) {
      instance.costs.push_back(
          rat_vector(node[t], instance.actions, "costs_per_type[" + std::to_string(t) + "]"));
    }
  }

  instance.rewards = rat_vector(field(exact_json, "rewards"), instance.outcomes, "rewards");

  if (exact_json.contains("type_weights")) {
    instance.weights =
        rat_vector(exact_json.at("type_weights"), instance.types, "type_weights");
  } else {
    instance.weights = uniform_weights(instance.types);
  }

  const nlohmann::json& forecasts = field(exact_json, "forecasts");
  if (!forecasts.is_array() || forecasts.size() != static_cast<std::size_t>(instance.types)) {
    throw InputError("forecasts: expected one block per type");
  }
  for (int t = 0; t < instance.types; ++t) {
    const nlohmann::json& block = forecasts[t];
    const std::string where = "forecasts[" + std::to_string(t) + "]";
    if (!block.is_array() || block.size() != static_cast<std::size_t>(instance.actions)) {
      throw InputError(where + ": expected one row per action");
    }
    std::vector<std::vector<Rat>> rows;
    for (int i = 0; i < instance.actions; ++i) {
      rows.push_back(
          rat_vector(block[i], instance.outcomes, where + "[" + std::to_string(i) + "]"));
    }
    instance.forecasts.push_back(std::move(rows));
  }

  if (exact_json.contains("provenance")) {
    const nlohmann::json& provenance = exact_json.at("provenance");
    if (!provenance.is_object()) {
      throw InputError("provenance must be a JSON object");
    }
    instance.provenance = provenance;
  }

  // Unsorted rewards or costs are accepted and sorted here; the applied
  // permutations are kept so files can be traced back to their source layout.
  nlohmann::json permutations = nlohmann::json::object();
  const std::vector<int> outcome_perm = sorting_permutation(instance.rewards);
  if (!is_identity(outcome_perm)) {
    instance.rewards = apply_permutation(instance.rewards, outcome_perm);
    for (auto& type_block : instance.forecasts) {
      for (auto& row : type_block) row = apply_permutation(row, outcome_perm);
    }
    permutations["outcomes"] = outcome_perm;
  }
  if (instance.shared_costs) {
    const std::vector<int> action_perm = sorting_permutation(instance.costs[0]);
    if (!is_identity(action_perm)) {
      for (int t = 0; t < instance.types; ++t) {
        instance.costs[t] = apply_permutation(instance.costs[t], action_perm);
        instance.forecasts[t] = apply_permutation(instance.forecasts[t], action_perm);
      }
      permutations["actions"] = action_perm;
    }
  } else {
    nlohmann::json per_type = nlohmann::json::array();
    bool any = false;
    for (int t = 0; t < instance.types; ++t) {
      const std::vector<int> action_perm = sorting_permutation(instance.costs[t]);
      per_type.push_back(action_perm);
      if (!is_identity(action_perm)) {
        any = true;
        instance.costs[t] = apply_permutation(instance.costs[t], action_perm);
        instance.forecasts[t] = apply_permutation(instance.forecasts[t], action_perm);
      }
    }
    if (any) permutations["actions_per_type"] = per_type;
  }
  if (!permutations.empty()) {
    instance.provenance["load_permutations"] = permutations;
  }

  require_valid(instance);
  return instance;
}

nlohmann::json instance_to_json(const Instance& instance) {
  nlohmann::json out;
  out["types"] = instance.types;
  out["actions"] = instance.actions;
  out["outcomes"] = instance.outcomes;
  if (instance.shared_costs) {
    out["costs"] = fraction_array(instance.costs.empty() ? std::vector<Rat>{} : instance.costs[0]);
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : instance.costs) rows.push_back(fraction_array(row));
    out["costs_per_type"] = rows;
  }
  out["rewards"] = fraction_array(instance.rewards);
  out["type_weights"] = fraction_array(instance.weights);
  nlohmann::json forecasts = nlohmann::json::array();
  for (const auto& type_block : instance.forecasts) {
    nlohmann::json block = nlohmann::json::array();
    for (const auto& row : type_block) block.push_back(fraction_array(row));
    forecasts.push_back(block);
  }
  out["forecasts"] = forecasts;
  if (instance.provenance.is_object() && !instance.provenance.empty()) {
    out["provenance"] = instance.provenance;
  }
  return out;
}

Instance load_instance(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return instance_from_json(parse_json_exact(text));
  } catch (const InputError& ex) {
    throw InputError(path + ": " + ex.what());
  }
}

void save_instance(const Instance& instance, const std::string& path) {
  write_text_file(path, instance_to_json(instance).dump(2) + "\n");
}

Contract contract_from_json(const nlohmann::json& exact_json, int outcomes) {
  if (!exact_json.is_object()) {
    throw InputError("contract file must be a JSON object");
  }
  reject_unknown_fields(exact_json, {"x"}, "contract file");
  return Contract{payment_vector(field(exact_json, "x"), outcomes, "x")};
}

nlohmann::json contract_to_json(const Contract& contract) {
  nlohmann::json out;
  out["x"] = fraction_array(contract.pay);
  return out;
}

Contract load_contract(const std::string& path, int outcomes) {
  const std::string text = read_text_file(path);
  try {
    return contract_from_json(parse_json_exact(text), outcomes);
  } catch (const InputError& ex) {
    throw InputError(path + ": " + ex.what());
  }
}

void save_contract(const Contract& contract, const std::string& path) {
  write_text_file(path, contract_to_json(contract).dump(2) + "\n");
}

Menu menu_from_json(const nlohmann::json& exact_json, int types, int outcomes) {
  if (!exact_json.is_object()) {
    throw InputError("menu file must be a JSON object");
  }
  reject_unknown_fields(exact_json, {"contracts"}, "menu file");
  const nlohmann::json& contracts = field(exact_json, "contracts");
  if (!contracts.is_array() || contracts.size() != static_cast<std::size_t>(types)) {
    throw InputError("contracts: expected one payment vector per type (" +
                     std::to_string(types) + ")");
  }
  Menu menu;
  for (int t = 0; t < types; ++t) {
    menu.entries.push_back(Contract{
        payment_vector(contracts[t], outcomes, "contracts[" + std::to_string(t) + "]")});
  }
  return menu;
}

nlohmann::json menu_to_json(const Menu& menu) {
  nlohmann::json contracts = nlohmann::json::array();
  for (const auto& entry : menu.entries) contracts.push_back(fraction_array(entry.pay));
  nlohmann::json out;
  out["contracts"] = contracts;
  return out;
}

Menu load_menu(const std::string& path, int types, int outcomes) {
  const std::string text = read_text_file(path);
  try {
    return menu_from_json(parse_json_exact(text), types, outcomes);
  } catch (const InputError& ex) {
    throw InputError(path + ": " + ex.what());
  }
}

void save_menu(const Menu& menu, const std::string& path) {
  write_text_file(path, menu_to_json(menu).dump(2) + "\n");
}

Graph graph_from_json(const nlohmann::json& json) {
  if (!json.is_object()) {
    throw InputError("graph file must be a JSON object");
  }
  reject_unknown_fields(json, {"n", "edges"}, "graph file");
  Graph graph;
  graph.n = dim_field(json, "n");
  const nlohmann::json& edges = field(json, "edges");
  if (!edges.is_array()) {
    throw InputError("edges: expected an array of [u, v] pairs");
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string where = "edges[" + std::to_string(k) + "]";
    const nlohmann::json& edge = edges[k];
    if (!edge.is_array() || edge.size() != 2) {
      throw InputError(where + ": expected a pair [u, v]");
    }
    const long u = int_field(edge[0], where + "[0]");
    const long v = int_field(edge[1], where + "[1]");
    graph.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  graph.adjacency();  // validates endpoints, self-loops and duplicates
  return graph;
}

Graph load_graph(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return graph_from_json(parse_json_exact(text));
  } catch (const InputError& ex) {
    throw InputError(path + ": " + ex.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw InputError("failed reading " + path);
  }
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InputError("cannot open " + path + " for writing");
  }
  out << contents;
  out.flush();
  if (!out) {
    throw InputError("failed writing " + path);
  }
}

}  // namespace contracts
