#pragma once

#include "dchain/hopf.hpp"

#include <vector>

namespace dchain {

// Weakly decreasing positive parts.
using IntPartition = std::vector<unsigned>;

BasisElement make_partition(const IntPartition& parts);  // sorts into decreasing order
IntPartition partition_of(const BasisElement& b);

// Symmetric functions in the elementary basis e_lambda: e_lambda e_mu = e_{lambda + mu},
// Delta(e_k) = sum_i e_i (x) e_{k-i}. Commutative, cocommutative, free commutative on the e_k.
class SymE final : public HopfAlgebra {
 public:
  AlgebraId id() const override { return AlgebraId::sym_e; }
  bool commutative() const override { return true; }
  bool cocommutative() const override { return true; }
  bool free_commutative() const override { return true; }
  nlohmann::json to_json(const BasisElement& b) const override;
  BasisElement from_json(const nlohmann::json& j) const override;
  std::string to_text(const BasisElement& b) const override;

 protected:
  Element do_product(const BasisElement& a, const BasisElement& b) const override;
  std::vector<CoproductTerm> do_coproduct(const BasisElement& x, unsigned left_degree) const override;
};

const SymE& sym_e_algebra();

std::vector<CoproductTerm> syme_coproduct(const IntPartition& lambda, unsigned i);

// All partitions of n in lexicographic order of their decreasing part lists.
std::vector<IntPartition> partitions_of(unsigned n);

}  // namespace dchain
