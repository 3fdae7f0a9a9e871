#pragma once

#include "dchain/hopf.hpp"

#include <vector>

namespace dchain {

// A deck of cards read top to bottom; letters are positive integers and may repeat.
using Word = std::vector<unsigned>;

BasisElement make_word(AlgebraId algebra, const Word& w);
Word word_of(const BasisElement& b);

// Shuffle product, deconcatenation coproduct. Commutative.
class ShuffleAlgebra final : public HopfAlgebra {
 public:
  AlgebraId id() const override { return AlgebraId::shuffle; }
  bool commutative() const override { return true; }
  bool cocommutative() const override { return false; }
  nlohmann::json to_json(const BasisElement& b) const override;
  BasisElement from_json(const nlohmann::json& j) const override;
  std::string to_text(const BasisElement& b) const override;

 protected:
  Element do_product(const BasisElement& a, const BasisElement& b) const override;
  std::vector<CoproductTerm> do_coproduct(const BasisElement& x, unsigned left_degree) const override;
};

// Concatenation product, deshuffle coproduct. Cocommutative; dual to the shuffle algebra.
class FreeAssociativeAlgebra final : public HopfAlgebra {
 public:
  AlgebraId id() const override { return AlgebraId::free_associative; }
  bool commutative() const override { return false; }
  bool cocommutative() const override { return true; }
  nlohmann::json to_json(const BasisElement& b) const override;
  BasisElement from_json(const nlohmann::json& j) const override;
  std::string to_text(const BasisElement& b) const override;

 protected:
  Element do_product(const BasisElement& a, const BasisElement& b) const override;
  std::vector<CoproductTerm> do_coproduct(const BasisElement& x, unsigned left_degree) const override;
};

const ShuffleAlgebra& shuffle_algebra();
const FreeAssociativeAlgebra& free_associative_algebra();

// All interleavings with multiplicity, as an element of the shuffle algebra.
Element shuffle_product(const Word& u, const Word& v);
std::vector<CoproductTerm> deconcatenate(const Word& w, unsigned i);
std::vector<CoproductTerm> deshuffle(const Word& w, unsigned i);

}  // namespace dchain
