#pragma once

#include "dchain/hopf.hpp"

#include <span>
#include <vector>

namespace dchain {

// One-line notation, a rearrangement of 1..n.
using Permutation = std::vector<unsigned>;

// Order-isomorphic permutation of a sequence of distinct integers.
Permutation standardise(std::span<const unsigned> s);
bool is_permutation_of_n(std::span<const unsigned> s);

BasisElement make_permutation(AlgebraId algebra, const Permutation& p);
Permutation permutation_of(const BasisElement& b);

// Fundamental basis: shifted-shuffle product, deconcatenate-and-standardise coproduct.
class FQSym final : public HopfAlgebra {
 public:
  AlgebraId id() const override { return AlgebraId::fqsym; }
  bool commutative() const override { return false; }
  bool cocommutative() const override { return false; }
  nlohmann::json to_json(const BasisElement& b) const override;
  BasisElement from_json(const nlohmann::json& j) const override;
  std::string to_text(const BasisElement& b) const override;

 protected:
  Element do_product(const BasisElement& a, const BasisElement& b) const override;
  std::vector<CoproductTerm> do_coproduct(const BasisElement& x, unsigned left_degree) const override;
};

// Graded dual of FQSym in the dual basis sigma*. The (1, n-1) coproduct removes
// the letter 1; the product sums over permutations whose prefix and suffix
// standardise to the two factors.
class FQSymDual final : public HopfAlgebra {
 public:
  AlgebraId id() const override { return AlgebraId::fqsym_dual; }
  bool commutative() const override { return false; }
  bool cocommutative() const override { return false; }
  nlohmann::json to_json(const BasisElement& b) const override;
  BasisElement from_json(const nlohmann::json& j) const override;
  std::string to_text(const BasisElement& b) const override;

 protected:
  Element do_product(const BasisElement& a, const BasisElement& b) const override;
  std::vector<CoproductTerm> do_coproduct(const BasisElement& x, unsigned left_degree) const override;
};

const FQSym& fqsym_algebra();
const FQSymDual& fqsym_dual_algebra();

Element fqsym_product(const Permutation& s, const Permutation& t);
std::vector<CoproductTerm> fqsym_coproduct(const Permutation& s, unsigned i);

}  // namespace dchain
