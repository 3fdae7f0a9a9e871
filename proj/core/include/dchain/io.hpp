#pragma once

#include "dchain/catalog.hpp"
#include "dchain/chain.hpp"
#include "dchain/spectral.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dchain {

// {"algebra": id, "states": [...], "rows": [{"from": i, "to": j, "num": "...", "den": "..."}]}
nlohmann::json matrix_to_json(const TransitionMatrix& k);
TransitionMatrix matrix_from_json(const nlohmann::json& j);
// One line per nonzero entry: from,to,probability with states in their text form.
std::string matrix_to_csv(const TransitionMatrix& k);

nlohmann::json eigenfunction_to_json(const EigenFunction& f);
EigenFunction eigenfunction_from_json(const nlohmann::json& j);
std::string eigenfunctions_to_csv(const std::vector<EigenFunction>& fs);

nlohmann::json distribution_to_json(const HopfAlgebra& h, const std::map<BasisElement, Rational>& law);
std::map<BasisElement, Rational> distribution_from_json(const nlohmann::json& j);

nlohmann::json lump_result_to_json(const LumpResult& r);
LumpResult lump_result_from_json(const nlohmann::json& j);

// Chain configuration file:
//   {"chain": "tree|todo|shuffle|rock", "model": {...}, "n": ..., "params": {"q2": "1/2", ...}}
// model keys: tree -> "type" (single|binomial|vp), "tree" (forest JSON or "four"/"eight");
//             todo/rock/shuffle -> "kind" (operator name), "r"; shuffle -> "deck".
struct ChainConfig {
  std::string chain = "tree";
  std::string model = "single";  // tree model
  std::string kind = "ter";      // operator kind for todo / shuffle / rock
  std::optional<unsigned> n;
  unsigned r = 1;
  std::optional<Word> deck;
  std::optional<nlohmann::json> tree;
  Rational q{1, 2}, q1{1, 4}, q2{1, 2}, q3{1, 4};
};

ChainConfig chain_config_from_json(const nlohmann::json& j);
nlohmann::json chain_config_to_json(const ChainConfig& c);

// A configuration turned into something runnable.
struct ConfiguredChain {
  const HopfAlgebra* algebra = nullptr;
  BasisElement start;
  std::function<TransitionMatrix()> matrix;
  Stepper stepper;
  std::optional<ChainSpec> spec;          // absent for the tree chain's tree-valued states
  std::optional<TreeChainConfig> tree;
  std::optional<OperatorSpec> op;
  unsigned n = 0;
};

OperatorSpec operator_from_config(const ChainConfig& c);
ConfiguredChain configure_chain(const ChainConfig& c, std::size_t cap = default_state_cap());

// "four", "eight", a forest JSON value, or a path-free inline JSON string.
BasisElement tree_from_json(const nlohmann::json& j);

}  // namespace dchain
