#ifndef CONTRACTS_IO_HPP
#define CONTRACTS_IO_HPP

#include <string>

#include <json.hpp>

#include "contracts/graph.hpp"
#include "contracts/instance.hpp"
#include "contracts/response.hpp"

namespace contracts {

/// Parses JSON with every numeric token replaced by its literal text, so
/// values like 0.1 can be converted exactly to rationals instead of going
/// through a double.  Throws InputError on malformed JSON.
nlohmann::json parse_json_exact(const std::string& text);

/// Instance files look like
///   { "types": 2, "actions": 2, "outcomes": 2,
///     "costs": ["0", "1/2"],            // or "costs_per_type": [[...], ...]
///     "rewards": ["0", "1"],
///     "type_weights": ["1/2", "1/2"],   // optional, defaults to uniform
///     "forecasts": [[["1","0"],["0","1"]], ...],
///     "provenance": { ... } }           // optional metadata
/// Numeric entries may be fractions ("1/3"), decimal strings ("0.25") or
/// bare JSON numbers; all are converted exactly.  Unsorted costs or rewards
/// are sorted on load (forecast axes permuted to match) and the applied
/// permutations are recorded under provenance["load_permutations"].
Instance instance_from_json(const nlohmann::json& exact_json);
nlohmann::json instance_to_json(const Instance& instance);
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

/// Contract files: { "x": ["0", "1/2"] }.
Contract contract_from_json(const nlohmann::json& exact_json, int outcomes);
nlohmann::json contract_to_json(const Contract& contract);
Contract load_contract(const std::string& path, int outcomes);
void save_contract(const Contract& contract, const std::string& path);

/// Menu files: { "contracts": [["0", "1/2"], ["0", "1/4"]] }.
Menu menu_from_json(const nlohmann::json& exact_json, int types, int outcomes);
nlohmann::json menu_to_json(const Menu& menu);
Menu load_menu(const std::string& path, int types, int outcomes);
void save_menu(const Menu& menu, const std::string& path);

/// Graph files: { "n": 5, "edges": [[1, 2], [2, 3]] }  (1-indexed vertices).
Graph graph_from_json(const nlohmann::json& json);
Graph load_graph(const std::string& path);

/// Reads a whole file or throws InputError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace contracts

#endif  // CONTRACTS_IO_HPP
