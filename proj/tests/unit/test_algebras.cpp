#include "dchain/algebras.hpp"
#include "dchain/catalog.hpp"

#include <doctest.h>

using namespace dchain;

namespace {

std::vector<BasisElement> samples() {
  return {make_word(AlgebraId::shuffle, {2, 1, 2}),
          make_word(AlgebraId::free_associative, {3, 1}),
          make_permutation(AlgebraId::fqsym, {2, 3, 1}),
          make_permutation(AlgebraId::fqsym_dual, {1, 3, 2}),
          four_person_company(),
          make_partition({3, 1, 1})};
}

}  // namespace

TEST_CASE("algebra names round-trip") {
  for (auto id : {AlgebraId::shuffle, AlgebraId::free_associative, AlgebraId::fqsym, AlgebraId::fqsym_dual,
                  AlgebraId::connes_kreimer, AlgebraId::sym_e})
    CHECK(algebra_from_name(algebra_name(id)) == id);
  CHECK_THROWS_AS(algebra_from_name("no-such-algebra"), ContractError);
}

TEST_CASE("basis elements round-trip through JSON") {
  for (const auto& b : samples()) {
    const HopfAlgebra& h = algebra_for(b.algebra);
    CHECK(h.from_json(h.to_json(b)) == b);
    CHECK_FALSE(h.to_text(b).empty());
  }
}

TEST_CASE("elements round-trip through JSON") {
  const auto& h = shuffle_algebra();
  const Element e = h.product(make_word(AlgebraId::shuffle, {1, 2}), make_word(AlgebraId::shuffle, {3}));
  CHECK(element_from_json(h, element_to_json(h, e)) == e);
}

TEST_CASE("malformed states are rejected") {
  CHECK_THROWS(fqsym_algebra().from_json(nlohmann::json::array({1, 1})));
  CHECK_THROWS(shuffle_algebra().from_json(nlohmann::json::array({0, 2})));
  CHECK_THROWS(sym_e_algebra().from_json(nlohmann::json::array({0})));
  CHECK_THROWS(fqsym_algebra().eta(make_word(AlgebraId::shuffle, {1})));
}

TEST_CASE("Connes-Kreimer coproduct cuts crowns to the left") {
  const auto& ck = connes_kreimer_algebra();
  const auto terms = ck.coproduct(four_person_company(), 1);
  REQUIRE(terms.size() == 2);
  const BasisElement path = make_forest({vertex(std::nullopt, {vertex("C", {vertex("D")})})});
  const BasisElement cherry = make_forest({vertex(std::nullopt, {vertex("A"), vertex("C")})});
  for (const auto& t : terms) {
    CHECK(t.left == single_vertex_forest());
    CHECK(t.coefficient == 1);
    CHECK((t.right == path || t.right == cherry));
  }
  // Root labels are forgotten: a cut-off subtree always has an unlabelled root.
  const auto three = ck.coproduct(four_person_company(), 2);
  bool found = false;
  for (const auto& t : three)
    if (t.left == make_forest({vertex(std::nullopt, {vertex("D")})})) found = true;
  CHECK(found);
}

TEST_CASE("Connes-Kreimer product is disjoint union") {
  const auto& ck = connes_kreimer_algebra();
  const Element p = ck.product(single_vertex_forest(), single_vertex_forest());
  REQUIRE(p.size() == 1);
  CHECK(p.begin()->first.degree == 2);
  CHECK(components(p.begin()->first).size() == 2);
}

TEST_CASE("FQSym dual: removing the letter 1, prefix/suffix product") {
  const auto& d = fqsym_dual_algebra();
  const auto t = d.coproduct(make_permutation(AlgebraId::fqsym_dual, {2, 1, 3}), 1);
  REQUIRE(t.size() == 1);
  CHECK(t[0].left == make_permutation(AlgebraId::fqsym_dual, {1}));
  CHECK(t[0].right == make_permutation(AlgebraId::fqsym_dual, {1, 2}));
  const Element p = d.product(make_permutation(AlgebraId::fqsym_dual, {1}), make_permutation(AlgebraId::fqsym_dual, {1}));
  CHECK(p.size() == 2);
  CHECK(p.coefficient(make_permutation(AlgebraId::fqsym_dual, {2, 1})) == 1);
}

TEST_CASE("sym-e coproduct of e_k") {
  const auto terms = sym_e_algebra().coproduct(make_partition({3}), 1);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].left == make_partition({1}));
  CHECK(terms[0].right == make_partition({2}));
}

TEST_CASE("structural flags") {
  CHECK(shuffle_algebra().commutative());
  CHECK(free_associative_algebra().cocommutative());
  CHECK(sym_e_algebra().free_commutative());
  CHECK(connes_kreimer_algebra().free_commutative());
  CHECK_FALSE(fqsym_algebra().commutative());
}
