#include "dchain/algebras.hpp"
#include "dchain/catalog.hpp"
#include "dchain/chain.hpp"
#include "dchain/distributions.hpp"

#include <doctest.h>

using namespace dchain;

TEST_CASE("permutations of 3 in lexicographic order") {
  const auto s = enumerate_states(fqsym_algebra(), AllPermutations{3});
  REQUIRE(s.size() == 6);
  CHECK(permutation_of(s.front()) == Permutation{1, 2, 3});
  CHECK(permutation_of(s[1]) == Permutation{1, 3, 2});
  CHECK(permutation_of(s.back()) == Permutation{3, 2, 1});
}

TEST_CASE("partitions of 4") {
  const auto s = enumerate_states(sym_e_algebra(), AllPartitions{4});
  std::vector<IntPartition> got;
  for (const auto& b : s) got.push_back(partition_of(b));
  CHECK(got == std::vector<IntPartition>{{1, 1, 1, 1}, {2, 1, 1}, {2, 2}, {3, 1}, {4}});
}

TEST_CASE("decks and words") {
  CHECK(enumerate_states(shuffle_algebra(), DeckStates{{1, 1, 2}}).size() == 3);
  CHECK(enumerate_states(shuffle_algebra(), DeckStates{{1, 2, 3, 4}}).size() == 24);
  CHECK(enumerate_states(free_associative_algebra(), AllWords{2, 3}).size() == 8);
}

TEST_CASE("closure of the four-person company under leaf removal") {
  const PieceDistribution p = top_to_random(4);
  const auto s = enumerate_states(connes_kreimer_algebra(), ClosureStates{four_person_company(), p});
  CHECK(s.size() == 6);
  CHECK(rooted_subtrees(four_person_company()).size() == 6);
}

TEST_CASE("the state cap is enforced") {
  CHECK_THROWS_AS(enumerate_states(fqsym_algebra(), AllPermutations{5}, 100), StateCapExceeded);
  try {
    enumerate_states(fqsym_algebra(), AllPermutations{7}, 5000);
    FAIL("expected the cap to trip");
  } catch (const StateCapExceeded& e) {
    CHECK(std::string(e.what()).find("cap exceeded") != std::string::npos);
    CHECK(e.cap() == 5000);
  }
}

TEST_CASE("dimension series") {
  const auto f = dimension_series(fqsym_algebra(), AllPermutations{4}, 4);
  REQUIRE(f);
  CHECK(*f == std::vector<Integer>{1, 1, 2, 6, 24});
  const auto e = dimension_series(sym_e_algebra(), AllPartitions{5}, 5);
  REQUIRE(e);
  CHECK(*e == std::vector<Integer>{1, 1, 2, 3, 5, 7});
}

TEST_CASE("state-space basis validation") {
  CHECK(validate_state_space_basis(todo_chain(OperatorSpec{}, 3)).valid);
  CHECK(validate_state_space_basis(rock_chain(riffle_distribution(4), 4)).valid);
}
