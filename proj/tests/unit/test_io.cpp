#include "dchain/io.hpp"
#include "dchain/fqsym.hpp"
#include "dchain/sym_e.hpp"
#include "dchain/words.hpp"

#include <doctest.h>

using namespace dchain;
using nlohmann::json;

TEST_CASE("matrix JSON round trip across algebras") {
  TreeChainConfig t;
  t.start = four_person_company();
  OperatorSpec trer;
  trer.kind = OperatorKind::trer;
  trer.r = 2;
  const std::vector<TransitionMatrix> ks{
      tree_chain_matrix(t), build_transition_matrix(todo_chain(trer, 4)),
      build_transition_matrix(rock_chain(riffle_distribution(4), 4)),
      build_transition_matrix(shuffle_chain(top_to_random(4), {1, 1, 2, 3}))};
  for (const auto& k : ks) {
    const json j = matrix_to_json(k);
    CHECK(matrix_from_json(json::parse(j.dump())) == k);
  }
}

TEST_CASE("matrix JSON rejects malformed input") {
  CHECK_THROWS_AS(matrix_from_json(json{{"algebra", "nope"}, {"states", json::array()}, {"rows", json::array()}}),
                  ContractError);
  json j = matrix_to_json(build_transition_matrix(todo_chain(OperatorSpec{}, 3)));
  j["rows"].push_back(j["rows"][0]);
  CHECK_THROWS_AS(matrix_from_json(j), ContractError);
  CHECK_THROWS_AS(matrix_from_json(json::object()), ContractError);
}

TEST_CASE("matrix CSV") {
  const std::string csv = matrix_to_csv(build_transition_matrix(todo_chain(OperatorSpec{}, 2)));
  CHECK(csv.rfind("from,to,probability\n", 0) == 0);
  CHECK(csv.find("1/2") != std::string::npos);
}

TEST_CASE("eigenfunction round trip and CSV") {
  TreeChainConfig t;
  t.start = four_person_company();
  const TransitionMatrix k = tree_chain_matrix(t);
  EigenFunction f = tree_eigenfunction(k.states()[2], t, k);
  f.name = "boss-C";
  const EigenFunction back = eigenfunction_from_json(json::parse(eigenfunction_to_json(f).dump()));
  CHECK(back.values == f.values);
  CHECK(back.states == f.states);
  CHECK(back.eigenvalue == f.eigenvalue);
  CHECK(back.name == f.name);
  const std::string csv = eigenfunctions_to_csv({f});
  CHECK(csv.rfind("name,side,eigenvalue,state,value\n", 0) == 0);
  json bad = eigenfunction_to_json(f);
  bad["side"] = "middle";
  CHECK_THROWS_AS(eigenfunction_from_json(bad), ContractError);
}

TEST_CASE("distribution round trip") {
  const TransitionMatrix k = build_transition_matrix(todo_chain(OperatorSpec{}, 3));
  const auto law = distribution_at_time(k, k.states()[0], 2);
  CHECK(distribution_from_json(distribution_to_json(fqsym_algebra(), law)) == law);
}

TEST_CASE("lump result round trip") {
  const TransitionMatrix k = build_transition_matrix(todo_chain(OperatorSpec{}, 4));
  const LumpResult good = lump(k, last_letters_map(2));
  REQUIRE(std::holds_alternative<TransitionMatrix>(good));
  const LumpResult back = lump_result_from_json(lump_result_to_json(good));
  CHECK(std::get<TransitionMatrix>(back) == std::get<TransitionMatrix>(good));

  // The top task, seen as a one-letter word.
  const LumpResult bad = lump(k, [](const BasisElement& x) { return make_word(AlgebraId::shuffle, {permutation_of(x).front()}); });
  REQUIRE(std::holds_alternative<LumpViolation>(bad));
  const LumpResult bad_back = lump_result_from_json(json::parse(lump_result_to_json(bad).dump()));
  const auto& v = std::get<LumpViolation>(bad_back);
  const auto& w = std::get<LumpViolation>(bad);
  CHECK(v.first == w.first);
  CHECK(v.second == w.second);
  CHECK(v.target_class == w.target_class);
  CHECK(v.first_mass == w.first_mass);
  CHECK(v.second_mass == w.second_mass);
}

TEST_CASE("chain configuration") {
  const json j = json::parse(R"({"chain": "tree", "model": {"type": "binomial", "tree": "eight"},
                                 "params": {"q2": "1/3"}})");
  const ChainConfig c = chain_config_from_json(j);
  CHECK(c.model == "binomial");
  CHECK(c.q2 == Rational(1, 3));
  const ChainConfig again = chain_config_from_json(chain_config_to_json(c));
  CHECK(again.q2 == c.q2);
  CHECK(again.model == c.model);
  const ConfiguredChain cc = configure_chain(c);
  CHECK(cc.n == 8);
  CHECK(cc.start == eight_person_company());

  CHECK_THROWS_AS(chain_config_from_json(json{{"chain", "bogus"}}), ContractError);
  CHECK_THROWS_AS(chain_config_from_json(json{{"chain", "tree"}, {"params", {{"q9", "1"}}}}), ContractError);
  CHECK_THROWS_AS(chain_config_from_json(json{{"chain", "tree"}, {"params", {{"q2", 0.5}}}}), ContractError);

  ChainConfig todo;
  todo.chain = "todo";
  CHECK_THROWS_AS(configure_chain(todo), ContractError);
  todo.n = 4;
  CHECK(configure_chain(todo).matrix().size() == 24);

  ChainConfig shuffle;
  shuffle.chain = "shuffle";
  shuffle.deck = Word{1, 1, 2};
  shuffle.n = 4;
  CHECK_THROWS_AS(configure_chain(shuffle), ContractError);
}

TEST_CASE("trees from JSON") {
  CHECK(tree_from_json("four") == four_person_company());
  CHECK(tree_from_json(json::parse(R"({"children": [{"label": "A"}]})")).degree == 2);
  CHECK_THROWS_AS(tree_from_json("{not json"), ContractError);
}
