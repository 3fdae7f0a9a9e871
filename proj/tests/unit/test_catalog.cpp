#include "dchain/catalog.hpp"
#include "dchain/chain.hpp"

#include <doctest.h>

#include <cmath>

using namespace dchain;

namespace {

BasisElement tree(std::vector<DecoratedTree> children) { return make_forest({vertex(std::nullopt, std::move(children))}); }

// Pinned order: boss, boss-A, boss-C, boss-C-D, boss-(A, C), boss-(A, C-D).
std::vector<BasisElement> pinned() {
  return {tree({}),
          tree({vertex("A")}),
          tree({vertex("C")}),
          tree({vertex("C", {vertex("D")})}),
          tree({vertex("A"), vertex("C")}),
          four_person_company()};
}

TreeChainConfig cfg(TreeModel model, Rational q2 = Rational(1, 2)) {
  TreeChainConfig c;
  c.start = four_person_company();
  c.model = model;
  c.q2 = q2;
  return c;
}

}  // namespace

TEST_CASE("rooted subtrees come in the pinned order") {
  CHECK(rooted_subtrees(four_person_company()) == pinned());
  CHECK(rooted_subtrees(eight_person_company()).size() == 39);
}

TEST_CASE("single-model matrix for the four-person company") {
  const TransitionMatrix k = tree_chain_matrix(cfg(TreeModel::single));
  const std::vector<std::vector<Rational>> want{{1, 0, 0, 0, 0, 0},
                                                {Rational(1, 2), Rational(1, 2), 0, 0, 0, 0},
                                                {Rational(1, 2), 0, Rational(1, 2), 0, 0, 0},
                                                {0, 0, Rational(3, 4), Rational(1, 4), 0, 0},
                                                {0, Rational(3, 8), Rational(3, 8), 0, Rational(1, 4), 0},
                                                {0, 0, 0, Rational(1, 3), Rational(2, 3), 0}};
  REQUIRE(k.states() == pinned());
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(k.entry(i, j) == want[i][j]);
}

TEST_CASE("binomial-model matrix, row by row") {
  for (const Rational q : {Rational(1, 3), Rational(7, 10), Rational(1), Rational(0)}) {
    const TransitionMatrix k = tree_chain_matrix(cfg(TreeModel::binomial, q));
    const Rational p = 1 - q;
    REQUIRE(k.states() == pinned());
    CHECK(k.entry(1, 0) == p * (1 + q));
    CHECK(k.entry(3, 0) == p * p * (1 + 2 * q));
    CHECK(k.entry(3, 2) == 3 * q * q * p);
    CHECK(k.entry(4, 1) == Rational(3, 2) * q * q * p);
    CHECK(k.entry(5, 0) == p * p * p * (1 + 3 * q));
    CHECK(k.entry(5, 2) == 4 * q * q * p * p);
    CHECK(k.entry(5, 4) == Rational(8, 3) * q * q * q * p);
    CHECK(k.entry(5, 5) == q * q * q * q);
  }
}

TEST_CASE("binomial q = 1/3: corrected first column") {
  const TransitionMatrix k = tree_chain_matrix(cfg(TreeModel::binomial, Rational(1, 3)));
  CHECK(k.entry(3, 0) == Rational(20, 27));
  CHECK(k.entry(5, 0) == Rational(16, 27));
}

TEST_CASE("a single boss is absorbing") {
  TreeChainConfig c;
  c.start = single_vertex_forest();
  const TransitionMatrix k = tree_chain_matrix(c);
  REQUIRE(k.size() == 1);
  CHECK(k.entry(0, 0) == 1);
}

TEST_CASE("direct firing formula equals the generic construction") {
  for (auto model : {TreeModel::single, TreeModel::binomial}) {
    TreeChainConfig c = cfg(model, Rational(2, 5));
    c.start = eight_person_company();
    CHECK(tree_chain_matrix(c) == tree_chain_matrix_generic(c));
  }
}

TEST_CASE("tree eigenfunctions of the four-person company") {
  const TreeChainConfig c = cfg(TreeModel::single);
  const TransitionMatrix k = tree_chain_matrix(c);
  const EigenFunction fc = tree_eigenfunction(pinned()[2], c, k);
  CHECK(fc.values == Vector{0, 0, 1, 3, Rational(3, 2), 4});
  CHECK(fc.eigenvalue == Rational(1, 2));
  const EigenFunction top = tree_eigenfunction(pinned()[5], c, k);
  CHECK(top.values == Vector{0, 0, 0, 0, 0, 1});
  CHECK(top.eigenvalue == 0);
  CHECK(tree_eigenfunction(pinned()[4], c, k).values[5] == Rational(8, 3));
  CHECK_THROWS_AS(tree_eigenfunction(pinned()[0], c, k), ContractError);
}

TEST_CASE("hook walk") {
  const FlatForest f = flat_of(four_person_company());
  const auto law = hook_walk_distribution(f);
  Rational total(0);
  for (std::size_t v = 0; v < f.size(); ++v) {
    total += law[v];
    if (!f.is_leaf(static_cast<int>(v))) CHECK(law[v] == 0);
  }
  CHECK(total == 1);
  const FlatForest path = flat_of(tree({vertex("C", {vertex("D")})}));
  const auto only = hook_walk_distribution(path);
  for (std::size_t v = 0; v < path.size(); ++v) CHECK(only[v] == (path.label[v] == std::optional<std::string>("D") ? 1 : 0));
}

TEST_CASE("hook-walk sampler frequencies") {
  CounterRng rng(11, 3);
  int removed_a = 0;
  const int trials = 30000;
  for (int i = 0; i < trials; ++i) {
    const auto [v, rest] = hook_walk_remove(four_person_company(), rng);
    if (rest == pinned()[3]) ++removed_a;
  }
  // Removing A leaves boss-C-D; the exact probability is 1/3.
  const double p = double(removed_a) / trials, se = std::sqrt((1.0 / 3) * (2.0 / 3) / trials);
  CHECK(std::abs(p - 1.0 / 3) < 4 * se);
}

TEST_CASE("removal distribution") {
  const auto one = removal_distribution(four_person_company(), 1);
  CHECK(one.at(pinned()[3]) == Rational(1, 3));
  CHECK(one.at(pinned()[4]) == Rational(2, 3));
  const auto three = removal_distribution(four_person_company(), 3);
  REQUIRE(three.size() == 1);
  CHECK(three.begin()->first == pinned()[0]);
  CHECK_THROWS_AS(removal_distribution(four_person_company(), 4), ContractError);
}

TEST_CASE("padding") {
  const BasisElement padded = pad_with_singletons(pinned()[2], 4);
  CHECK(padded.degree == 4);
  CHECK(tree_part(padded) == pinned()[2]);
  CHECK(tree_part(pad_with_singletons(pinned()[0], 4)) == pinned()[0]);
}

TEST_CASE("team counts") {
  TreeChainConfig c = cfg(TreeModel::single);
  c.start = eight_person_company();
  CHECK(team_count_observable({1, 2}, c).evaluate(eight_person_company()) == 160);
  CHECK(team_count_observable({0, 0}, c).evaluate(eight_person_company()) == 8);
  CHECK_FALSE(team_count_observable({0, 0}, c).eigenvalue.has_value());
  CHECK(*team_count_observable({1, 2}, c).eigenvalue == Rational(1, 2));
  c.model = TreeModel::binomial;
  c.q2 = Rational(1, 3);
  CHECK(*team_count_observable({1}, c).eigenvalue == Rational(1, 9));
  CHECK_THROWS_AS(team_count_observable({1, 1, 1}, c), ContractError);
}

TEST_CASE("team count is an eigenfunction of both models") {
  for (auto model : {TreeModel::single, TreeModel::binomial}) {
    TreeChainConfig c = cfg(model, Rational(3, 7));
    c.start = eight_person_company();
    const TransitionMatrix k = tree_chain_matrix(c);
    for (const std::vector<unsigned>& s : std::vector<std::vector<unsigned>>{{1}, {0, 1}, {1, 2}, {2, 3}}) {
      const Observable f = team_count_observable(s, c);
      Vector v;
      for (const auto& x : k.states()) v.push_back(f.evaluate(x));
      CHECK_NOTHROW(make_eigenfunction(k, Side::right, *f.eigenvalue, v));
    }
  }
}

TEST_CASE("vp observable and bound") {
  TreeChainConfig c = cfg(TreeModel::vp);
  CHECK(vp_observable(0, c).evaluate(single_vertex_forest()) == 0);
  TreeChainConfig one;
  one.start = single_vertex_forest();
  one.model = TreeModel::vp;
  CHECK(vp_observable(0, one).evaluate(single_vertex_forest()) == Rational(1, 2));
  const TransitionMatrix k = tree_chain_matrix(c);
  for (unsigned t = 0; t <= 3; ++t) CHECK(vp_bound(c, k, 2, t).holds());
  CHECK_THROWS_AS(vp_bound(c, k, 3, 1), ContractError);
  c.q2 = Rational(1, 3);
  CHECK_THROWS_AS(c.validate(), ContractError);
}

TEST_CASE("unlabelled forests and trees") {
  const std::vector<std::size_t> forests{1, 2, 4, 9, 20, 48}, trees{1, 1, 2, 4, 9, 20};
  for (unsigned n = 1; n <= 6; ++n) {
    CHECK(unlabelled_forests(n).size() == forests[n - 1]);
    CHECK(unlabelled_trees(n).size() == trees[n - 1]);
  }
}

TEST_CASE("trunk hook sums are binomial coefficients") {
  CHECK(trunk_hook_sum(eight_person_company(), 3) == 56);
  const auto [lhs, rhs] = hook_ratio_sides(eight_person_company(), pinned()[1], 2);
  CHECK(lhs == rhs);
}

TEST_CASE("to-do mechanics") {
  OperatorSpec trer;
  trer.kind = OperatorKind::trer;
  trer.r = 2;
  CHECK(todo_matrix_direct(trer, 4) == build_transition_matrix(todo_chain(trer, 4)));
  const TransitionMatrix k = todo_matrix_direct(trer, 5);
  CHECK(k.entry(k.require_index(make_permutation(AlgebraId::fqsym, {2, 3, 5, 4, 1})),
                k.require_index(make_permutation(AlgebraId::fqsym, {1, 5, 4, 2, 3}))) > 0);
  const TransitionMatrix one = todo_matrix_direct(OperatorSpec{}, 1);
  CHECK(one.size() == 1);
  CHECK(one.entry(0, 0) == 1);
}

TEST_CASE("relative-order eigenfunctions") {
  CHECK(first_moved_index({1, 2, 5, 3, 4}) == 2);
  CHECK(first_moved_index({1, 2, 3}) == 3);
  const std::vector<BasisElement> s{make_permutation(AlgebraId::fqsym, {3, 5, 4, 1, 2}),
                                    make_permutation(AlgebraId::fqsym, {2, 4, 1, 5, 3}),
                                    make_permutation(AlgebraId::fqsym, {2, 5, 4, 3, 1}),
                                    make_permutation(AlgebraId::fqsym, {1, 2, 3, 4, 5})};
  CHECK(todo_eigenfunction_values({1, 2, 5, 3, 4}, s) == Vector{1, -1, 0, 0});
  CHECK(todo_eigenfunction_values({1, 2, 3, 4, 5}, s) == Vector{1, 1, 1, 1});
  OperatorSpec binter;
  binter.kind = OperatorKind::binter;
  binter.q2 = Rational(1, 2);
  for (const auto& op : {OperatorSpec{}, binter}) {
    const TransitionMatrix k = build_transition_matrix(todo_chain(op, 4));
    CHECK(fqsym_eigenbasis(k, op, 4).size() == 24);
  }
}

TEST_CASE("newest-position law") {
  const PositionLaw a = newest_position_distribution(5, 2, 1, OperatorSpec{});
  CHECK(a.agree());
  CHECK(a.exact.at(3) == Rational(3, 5));
  CHECK(a.exact.at(4) == Rational(1, 5));
  const PositionLaw zero = newest_position_distribution(4, 1, 0, OperatorSpec{});
  CHECK(zero.exact.at(2) == 1);
  CHECK(zero.agree());
}

TEST_CASE("rock survival bound") {
  for (unsigned t = 0; t <= 10; ++t) CHECK(rock_survival_bound({4}, 3, t).holds());
  CHECK(rock_survival_bound({4}, 3, 0).value == 1);
}

TEST_CASE("tree model names") {
  for (auto m : {TreeModel::single, TreeModel::binomial, TreeModel::vp}) CHECK(tree_model_from_name(tree_model_name(m)) == m);
  CHECK_THROWS_AS(tree_model_from_name("other"), ContractError);
}
