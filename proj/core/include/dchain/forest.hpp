#pragma once

#include "dchain/hopf.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dchain {

// Non-planar rooted tree; sibling order carries no meaning.
struct DecoratedTree {
  std::optional<std::string> label;
  std::vector<DecoratedTree> children;
};
using DecoratedForest = std::vector<DecoratedTree>;

DecoratedTree vertex(std::optional<std::string> label = std::nullopt, std::vector<DecoratedTree> children = {});

// Vertices in preorder of the canonical form; parent < child.
struct FlatForest {
  std::vector<int> parent;  // -1 for component roots
  std::vector<std::optional<std::string>> label;
  std::vector<std::vector<int>> children;

  std::size_t size() const { return parent.size(); }
  std::vector<int> roots() const;
  bool is_leaf(int v) const { return children[v].empty(); }
  // h(v): v together with all its descendants.
  std::vector<unsigned> hook_lengths() const;
  // a(v): v together with all its ancestors.
  std::vector<unsigned> ancestor_counts() const;
};

// Canonical payload. Every component root is unlabelled (root labels are forgotten).
std::string encode_forest(const DecoratedForest& f);
DecoratedForest decode_forest(const std::string& payload);

BasisElement make_forest(const DecoratedForest& f);
DecoratedForest forest_of(const BasisElement& b);
FlatForest flatten(const DecoratedForest& f);
FlatForest flat_of(const BasisElement& b);
// The induced forest on a vertex subset; vertices whose parent is dropped become unlabelled roots.
BasisElement induced_forest(const FlatForest& f, const std::vector<bool>& keep);

// Calls back with every parent-closed vertex set ("trunk") of the given size.
void for_each_trunk(const FlatForest& f, std::size_t size, const std::function<void(const std::vector<bool>&)>& fn);

// Decorated Connes-Kreimer algebra: disjoint-union product, admissible-cut coproduct
// with the cut-away crown on the left and the rooted trunk on the right.
class ConnesKreimer final : public HopfAlgebra {
 public:
  AlgebraId id() const override { return AlgebraId::connes_kreimer; }
  bool commutative() const override { return true; }
  bool cocommutative() const override { return false; }
  bool free_commutative() const override { return true; }
  nlohmann::json to_json(const BasisElement& b) const override;
  BasisElement from_json(const nlohmann::json& j) const override;
  std::string to_text(const BasisElement& b) const override;

 protected:
  Element do_product(const BasisElement& a, const BasisElement& b) const override;
  std::vector<CoproductTerm> do_coproduct(const BasisElement& x, unsigned left_degree) const override;
};

const ConnesKreimer& connes_kreimer_algebra();

std::vector<CoproductTerm> ck_coproduct(const DecoratedForest& x, unsigned i);

// deg x! / prod_v h(v), the number of increasing labellings.
Integer hook_formula(const BasisElement& forest);

nlohmann::json forest_to_json(const DecoratedForest& f);
// Accepts a forest array or a single tree object.
DecoratedForest forest_from_json(const nlohmann::json& j);
std::string forest_text(const DecoratedForest& f);

// Split a forest into its connected components (each as a one-tree forest).
std::vector<BasisElement> components(const BasisElement& forest);
BasisElement single_vertex_forest();

}  // namespace dchain
