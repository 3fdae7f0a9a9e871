#pragma once

#include "dchain/hopf.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace dchain {

// The named operator families. Parameters are exact rationals.
enum class OperatorKind {
  identity,   // delta at (n)
  riffle,     // binom(n,i)/2^n at (i, n-i)
  ter,        // top-to-random: (1, n-1)
  trer,       // top-r-to-random: (1^r, n-r)
  binter,     // binomial-top-to-random: r ~ Bin(n, 1-q2) at (1^r, n-r)
  tober,      // top-or-bottom-to-random: q at (1,n-1), 1-q at (n-1,1)
  bintobrer,  // r cards, each from the top w.p. q, else from the bottom
  trintober,  // trinomial: (1^r1, r2, 1^r3) with weights q1^r1 q2^r2 q3^r3
  taber,      // top-and-bottom-to-random: (1, n-2, 1)
  tabrer,     // (1^r, n-2r, 1^r)
};

struct OperatorSpec {
  OperatorKind kind = OperatorKind::ter;
  unsigned r = 1;
  Rational q{1, 2};  // tober / bintobrer
  Rational q1{1, 4}, q2{1, 2}, q3{1, 4};

  PieceDistribution distribution(unsigned n) const;
  std::string name() const;
  // In the top/bottom-to-random family (every composition has at most one part above 1).
  bool top_to_random_family() const;
  bool two_sided() const;
  // beta_j for the top/bottom-to-random family.
  Rational family_eigenvalue(unsigned n, unsigned j) const;
};

OperatorKind operator_kind_from_name(std::string_view name);
std::string_view operator_kind_name(OperatorKind kind);

PieceDistribution identity_distribution(unsigned n);
PieceDistribution riffle_distribution(unsigned n);
PieceDistribution top_to_random(unsigned n);
PieceDistribution top_r_to_random(unsigned n, unsigned r);
PieceDistribution binomial_top_to_random(unsigned n, const Rational& q2);
PieceDistribution top_or_bottom_to_random(unsigned n, const Rational& q);
PieceDistribution binomial_top_or_bottom_r(unsigned n, const Rational& q, unsigned r);
PieceDistribution trinomial_top_or_bottom(unsigned n, const Rational& q1, const Rational& q2, const Rational& q3);
PieceDistribution top_and_bottom_to_random(unsigned n);
PieceDistribution top_and_bottom_r(unsigned n, unsigned r);

// (1^a, middle, 1^b), where 1^0 stands for a single part of size 0.
WeakComposition padded_composition(unsigned a, unsigned middle, unsigned b);

}  // namespace dchain
