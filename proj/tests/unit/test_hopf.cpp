#include "dchain/algebras.hpp"
#include "dchain/catalog.hpp"
#include "dchain/distributions.hpp"

#include <doctest.h>

using namespace dchain;

namespace {

BasisElement sw(Word w) { return make_word(AlgebraId::shuffle, w); }
BasisElement fw(Word w) { return make_word(AlgebraId::free_associative, w); }
BasisElement perm(Permutation p) { return make_permutation(AlgebraId::fqsym, p); }

Element sum(std::initializer_list<std::pair<BasisElement, Rational>> terms) {
  Element e;
  for (const auto& [b, c] : terms) e.add(b, c);
  return e;
}

}  // namespace

TEST_CASE("refined coproduct of a shuffle-algebra word") {
  const auto& h = shuffle_algebra();
  TensorSum a;
  a.add({sw({1}), sw({5}), sw({5, 2})}, 1);
  CHECK(h.refined_coproduct(sw({1, 5, 5, 2}), {1, 1, 2}) == a);
  TensorSum b;
  b.add({sw({1, 5}), h.unit(), sw({5, 2})}, 1);
  CHECK(h.refined_coproduct(sw({1, 5, 5, 2}), {2, 0, 2}) == b);
  TensorSum whole;
  whole.add({sw({1, 5, 5, 2})}, 1);
  CHECK(h.refined_coproduct(sw({1, 5, 5, 2}), {4}) == whole);
}

TEST_CASE("descent operators on words") {
  CHECK(descent_operator_D(shuffle_algebra(), sw({1, 5, 5, 2}), {1, 3}) ==
        sum({{sw({1, 5, 5, 2}), 1}, {sw({5, 1, 5, 2}), 1}, {sw({5, 5, 1, 2}), 1}, {sw({5, 5, 2, 1}), 1}}));
  CHECK(descent_operator_D(free_associative_algebra(), fw({3, 1, 6}), {1, 2}) ==
        sum({{fw({3, 1, 6}), 1}, {fw({1, 3, 6}), 1}, {fw({6, 3, 1}), 1}}));
  CHECK(descent_operator_D(shuffle_algebra(), sw({2, 1, 3}), {3}) == Element(sw({2, 1, 3})));
}

// binter_2(1/2) on 12: r = 0 w.p. 1/4 keeps 12; r = 1, 2 (w.p. 1/2, 1/4) both act as
// (1,1), i.e. (12 + 21)/2. So 12 gets 1/4 + 1/4 + 1/8 and 21 gets 1/4 + 1/8.
TEST_CASE("descent operator of a distribution") {
  CHECK(descent_operator_P(fqsym_algebra(), perm({1, 2}), PieceDistribution::point({1, 1})) ==
        sum({{perm({1, 2}), Rational(1, 2)}, {perm({2, 1}), Rational(1, 2)}}));
  CHECK(descent_operator_P(shuffle_algebra(), sw({1, 2}), binomial_top_to_random(2, Rational(1, 2))) ==
        sum({{sw({1, 2}), Rational(5, 8)}, {sw({2, 1}), Rational(3, 8)}}));
  CHECK(descent_operator_P(fqsym_algebra(), perm({2, 3, 1}), identity_distribution(3)) == Element(perm({2, 3, 1})));
}

TEST_CASE("eta counts full deconstructions") {
  CHECK(fqsym_algebra().eta(perm({3, 1, 4, 2})) == 1);
  CHECK(shuffle_algebra().eta(sw({2, 2, 1})) == 1);
  CHECK(connes_kreimer_algebra().eta(four_person_company()) == 3);
  CHECK(hook_formula(four_person_company()) == 3);
  CHECK(free_associative_algebra().eta(fw({1, 2, 3})) == 6);
  CHECK(free_associative_algebra().eta(fw({1, 1, 2})) == 6);
  CHECK(sym_e_algebra().eta(make_partition({2, 1})) == 3);
}

TEST_CASE("products") {
  CHECK(shuffle_algebra().product(sw({1, 5}), sw({5, 2})) ==
        sum({{sw({1, 5, 5, 2}), 2}, {sw({1, 5, 2, 5}), 1}, {sw({5, 1, 5, 2}), 1}, {sw({5, 1, 2, 5}), 1}, {sw({5, 2, 1, 5}), 1}}));
  CHECK(shuffle_algebra().product(sw({1}), sw({1})) == sum({{sw({1, 1}), 2}}));
  CHECK(shuffle_algebra().product(shuffle_algebra().unit(), sw({3, 1})) == Element(sw({3, 1})));
  CHECK(fqsym_algebra().product(perm({1}), perm({1})) == sum({{perm({1, 2}), 1}, {perm({2, 1}), 1}}));
  const Element big = fqsym_algebra().product(perm({3, 1, 2}), perm({2, 1}));
  CHECK(big.size() == 10);
  CHECK(big.coefficient(perm({3, 1, 2, 5, 4})) == 1);
  CHECK(big.coefficient(perm({5, 4, 3, 1, 2})) == 1);
  CHECK(big.coefficient(perm({3, 5, 1, 4, 2})) == 1);
  CHECK(big.coefficient(perm({1, 2, 3, 4, 5})) == 0);
  CHECK(sym_e_algebra().product(make_partition({2}), make_partition({3, 1})) == Element(make_partition({3, 2, 1})));
}

TEST_CASE("single-split coproducts") {
  const auto t = shuffle_algebra().coproduct(sw({3, 1, 6}), 1);
  REQUIRE(t.size() == 1);
  CHECK(t[0].left == sw({3}));
  CHECK(t[0].right == sw({1, 6}));

  TensorSum fa;
  for (const auto& c : free_associative_algebra().coproduct(fw({3, 1, 6}), 1)) fa.add({c.left, c.right}, c.coefficient);
  TensorSum want;
  want.add({fw({3}), fw({1, 6})}, 1);
  want.add({fw({1}), fw({3, 6})}, 1);
  want.add({fw({6}), fw({3, 1})}, 1);
  CHECK(fa == want);

  const auto f = fqsym_algebra().coproduct(perm({4, 1, 3, 2}), 2);
  REQUIRE(f.size() == 1);
  CHECK(f[0].left == perm({2, 1}));
  CHECK(f[0].right == perm({2, 1}));

  const auto zero = shuffle_algebra().coproduct(sw({2, 1}), 0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].left == shuffle_algebra().unit());
}

TEST_CASE("standardisation") {
  CHECK(standardise(Permutation{4, 1, 3}) == Permutation{3, 1, 2});
  CHECK(standardise(Permutation{1, 3, 2}) == Permutation{1, 3, 2});
  CHECK(standardise(Permutation{9, 7}) == Permutation{2, 1});
}

TEST_CASE("composing descent operators") {
  const auto terms = compose_descent_terms({1, 1}, {1, 1}, Orientation::commutative);
  CHECK(terms.size() == 2);
  CHECK(std::find(terms.begin(), terms.end(), WeakComposition{1, 0, 0, 1}) != terms.end());
  CHECK(std::find(terms.begin(), terms.end(), WeakComposition{0, 1, 1, 0}) != terms.end());
  CHECK(compose_descent({1, 1}, {1, 1}, Orientation::commutative) == CompositionSum(WeakComposition{1, 1}, 2));
  CHECK(compose_descent({3}, {1, 2}, Orientation::commutative) == CompositionSum(WeakComposition{1, 2}, 1));
  CHECK(compose_descent({1, 1}, {2}, Orientation::cocommutative) == CompositionSum(WeakComposition{1, 1}, 1));
}

TEST_CASE("internal product") {
  const CompositionSum two(WeakComposition{2}, 1), half(WeakComposition{1, 1}, Rational(1, 2)),
      one(WeakComposition{1, 1}, 1);
  CHECK(internal_product(two, two, Orientation::commutative) == two);
  CHECK(internal_product(half, half, Orientation::commutative) == half);
  CHECK(internal_product(one, two, Orientation::commutative) == one);
}

TEST_CASE("piece distributions") {
  CHECK_THROWS_AS(PieceDistribution(2, {{WeakComposition{1, 1}, Rational(1, 2)}}), ContractError);
  CHECK_THROWS_AS(PieceDistribution(2, {{WeakComposition{1, 2}, 1}}), ContractError);
  const PieceDistribution r = riffle_distribution(3);
  CHECK(PieceDistribution::from_operator(3, r.operator_sum()).operator_sum() == r.operator_sum());
  const PieceDistribution mix = top_to_random(3).mixture(Rational(1, 3), identity_distribution(3));
  Rational total(0);
  for (const auto& [d, w] : mix.weights()) total += w;
  CHECK(total == 1);
}

TEST_CASE("linear combinations drop zero terms and refuse mixed algebras") {
  Element e(sw({1}));
  e.add(sw({1}), -1);
  CHECK(e.empty());
  Element f(sw({1}));
  CHECK_THROWS_AS(f.add(perm({1}), 1), ContractError);
}
