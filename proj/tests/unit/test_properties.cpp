// Seeded random property tests.
#include "dchain/catalog.hpp"
#include "dchain/forest.hpp"
#include "dchain/fqsym.hpp"
#include "dchain/sym_e.hpp"
#include "dchain/words.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace dchain;

namespace {

std::mt19937_64& gen() {
  static std::mt19937_64 g(20261016);
  return g;
}

unsigned uniform(unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(gen()); }

Rational random_probability() {
  const unsigned den = uniform(2, 9);
  Rational q(uniform(1, den - 1), den);
  q.canonicalize();
  return q;
}

struct Sample {
  const HopfAlgebra* h;
  BasisElement x;
};

Sample random_element() {
  const unsigned n = uniform(3, 6);
  switch (uniform(0, 5)) {
    case 0:
    case 1: {
      Word w(n);
      for (auto& c : w) c = uniform(1, 3);
      return uniform(0, 1) ? Sample{&shuffle_algebra(), make_word(AlgebraId::shuffle, w)}
                           : Sample{&free_associative_algebra(), make_word(AlgebraId::free_associative, w)};
    }
    case 2:
    case 3: {
      Permutation p(n);
      std::iota(p.begin(), p.end(), 1u);
      std::shuffle(p.begin(), p.end(), gen());
      return uniform(0, 1) ? Sample{&fqsym_algebra(), make_permutation(AlgebraId::fqsym, p)}
                           : Sample{&fqsym_dual_algebra(), make_permutation(AlgebraId::fqsym_dual, p)};
    }
    case 4: {
      const auto all = unlabelled_forests(n);
      return {&connes_kreimer_algebra(), all[uniform(0, static_cast<unsigned>(all.size() - 1))]};
    }
    default: {
      const auto all = partitions_of(n);
      return {&sym_e_algebra(), make_partition(all[uniform(0, static_cast<unsigned>(all.size() - 1))])};
    }
  }
}

PieceDistribution random_distribution(unsigned n) {
  OperatorSpec op;
  const std::vector<OperatorKind> kinds{OperatorKind::ter,       OperatorKind::trer,      OperatorKind::binter,
                                        OperatorKind::tober,     OperatorKind::bintobrer, OperatorKind::trintober,
                                        OperatorKind::riffle,    OperatorKind::taber};
  op.kind = kinds[uniform(0, static_cast<unsigned>(kinds.size() - 1))];
  op.r = uniform(1, n - 1);
  op.q = random_probability();
  op.q2 = random_probability();
  op.q1 = (1 - op.q2) * random_probability();
  op.q3 = 1 - op.q1 - op.q2;
  return op.distribution(n);
}

}  // namespace

TEST_CASE("coassociativity on random elements") {
  for (int trial = 0; trial < 60; ++trial) {
    const Sample s = random_element();
    const unsigned n = s.x.degree;
    const unsigned a = uniform(1, n - 2), b = uniform(1, n - 1 - a), c = n - a - b;
    CAPTURE(s.h->to_text(s.x));
    const TensorSum direct = s.h->refined_coproduct(s.x, WeakComposition{a, b, c});
    TensorSum left, right;
    for (const auto& t : s.h->coproduct(s.x, a))
      for (const auto& u : s.h->coproduct(t.right, b)) left.add({t.left, u.left, u.right}, t.coefficient * u.coefficient);
    for (const auto& t : s.h->coproduct(s.x, a + b))
      for (const auto& u : s.h->coproduct(t.left, a)) right.add({u.left, u.right, t.right}, t.coefficient * u.coefficient);
    CHECK(left == direct);
    CHECK(right == direct);
  }
}

TEST_CASE("random descent operators give stochastic eta-weighted rows") {
  for (int trial = 0; trial < 60; ++trial) {
    const Sample s = random_element();
    const PieceDistribution p = random_distribution(s.x.degree);
    const Element image = descent_operator_P(*s.h, s.x, p);
    const Rational eta_x = eta(*s.h, s.x);
    REQUIRE(eta_x > 0);
    Rational total(0);
    for (const auto& [y, c] : image) {
      const Rational k = eta(*s.h, y) / eta_x * c;
      CHECK(k >= 0);
      total += k;
    }
    CAPTURE(s.h->to_text(s.x));
    CHECK(total == 1);
  }
}

TEST_CASE("random to-do chains are stochastic and lump onto the last letters") {
  for (int trial = 0; trial < 12; ++trial) {
    const unsigned n = uniform(3, 5), k = uniform(1, n - 1);
    OperatorSpec op;
    op.kind = std::vector<OperatorKind>{OperatorKind::ter, OperatorKind::trer, OperatorKind::binter}[uniform(0, 2)];
    op.r = uniform(1, n - 1);
    op.q2 = random_probability();
    const TransitionMatrix m = build_transition_matrix(todo_chain(op, n));
    for (std::size_t i = 0; i < m.size(); ++i) {
      Rational row(0);
      for (const auto& [j, p] : m.row(i)) {
        CHECK(p > 0);
        row += p;
      }
      CHECK(row == 1);
    }
    CAPTURE(op.name());
    CAPTURE(k);
    CHECK(std::holds_alternative<TransitionMatrix>(lump(m, last_letters_map(k))));
  }
}

TEST_CASE("rational text round trip") {
  for (int trial = 0; trial < 200; ++trial) {
    const long num = static_cast<long>(uniform(0, 2000)) - 1000;
    Rational c(num, static_cast<long>(uniform(1, 500)));
    c.canonicalize();
    CHECK(parse_rational(fraction_string(c)) == c);
  }
}
