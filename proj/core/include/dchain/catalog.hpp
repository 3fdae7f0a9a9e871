#pragma once

#include "dchain/chain.hpp"
#include "dchain/distributions.hpp"
#include "dchain/spectral.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dchain {

// A state-to-rational statistic, optionally registered as a right eigenfunction.
struct Observable {
  std::string name;
  std::function<Rational(const BasisElement&)> evaluate;
  std::optional<Rational> eigenvalue;
};

// One transition of a chain drawn with the given stream.
using Stepper = std::function<BasisElement(const BasisElement&, CounterRng&)>;

Stepper generic_stepper(const ChainSpec& spec);

// ---------------------------------------------------------------- company trees

enum class TreeModel { single, binomial, vp };

struct TreeChainConfig {
  BasisElement start;  // one tree, unlabelled root
  TreeModel model = TreeModel::single;
  Rational q2{1, 2};
  Rational q1{1, 4}, q3{1, 4};

  unsigned n0() const { return start.degree; }
  // ter, binter(q2) or trintober(q1, q2, q3) at degree n0.
  PieceDistribution distribution() const;
  void validate() const;
};

TreeModel tree_model_from_name(std::string_view name);
std::string_view tree_model_name(TreeModel m);

// root-(A, C-D)
BasisElement four_person_company();
// root-(A-B, C-(D, E, F-G))
BasisElement eight_person_company();

// Every forest (resp. tree) on n unlabelled vertices, canonically ordered.
std::vector<BasisElement> unlabelled_forests(unsigned n);
std::vector<BasisElement> unlabelled_trees(unsigned n);
// Connected vertex sets containing the root, as trees, canonically ordered.
std::vector<BasisElement> rooted_subtrees(const BasisElement& tree);
// The forest of n0 vertices standing for tree T: T plus n0 - deg T isolated vertices.
BasisElement pad_with_singletons(const BasisElement& tree, unsigned n0);
// Inverse of the padding: the component with more than one vertex, or the single vertex.
BasisElement tree_part(const BasisElement& forest);

// Probability that the hook walk ends at each vertex (zero off the leaves). With a
// start vertex, steps 2-3 only; without, the start is uniform.
std::vector<Rational> hook_walk_distribution(const FlatForest& tree, std::optional<int> start = std::nullopt);
// One promotion cascade: returns the removed vertex (index in the flattened tree) and the new tree.
std::pair<int, BasisElement> hook_walk_remove(const BasisElement& tree, CounterRng& rng);
// Law of the tree left after k successive removals.
std::map<BasisElement, Rational> removal_distribution(const BasisElement& tree, unsigned k);

// Generic Hopf construction on padded forests (single/binomial) or on the closure of the
// start forest (vp). States are trees for single/binomial and forests for vp.
TransitionMatrix tree_chain_matrix_generic(const TreeChainConfig& cfg);
// Direct firing/promotion formula; for single/binomial it is checked against the generic build.
TransitionMatrix tree_chain_matrix(const TreeChainConfig& cfg);
// Firing sampler on trees (single/binomial), generic sampler on forests (vp).
Stepper tree_stepper(const TreeChainConfig& cfg);

// binom(n, n') * P(n - n' removals from T end at T'), eigenvalue (n0 - n')/n0 or q2^n'.
EigenFunction tree_eigenfunction(const BasisElement& subtree, const TreeChainConfig& cfg, const TransitionMatrix& k);

// T -> n * prod_i binom(n^(i), s_i); departments are identified by their head's label and
// ordered as the start tree's root children sorted by label.
Observable team_count_observable(const std::vector<unsigned>& s, const TreeChainConfig& cfg);
// fo_j on forests: sum_u binom(h(u), n0 - j) (q3/(q1+q3))^(a(u)-1) (q1/(q1+q3))^h(u).
Observable vp_observable(unsigned j, const TreeChainConfig& cfg);

struct BoundCheck {
  Rational value;
  Rational bound;
  bool holds() const { return value <= bound; }
};
// E[fo_j(X_t)] against q2^((n0-j)t) fo_j(X_0) max binom(n0, a(u)-1), exact.
BoundCheck vp_bound(const TreeChainConfig& cfg, const TransitionMatrix& forest_matrix, unsigned j, unsigned t);

// Both sides of the coproduct-ratio identity for the split (1^(j-i), n-j, 1^i) and middle tree.
std::pair<Rational, Rational> hook_ratio_sides(const BasisElement& forest, const BasisElement& middle, unsigned i);
// sum over trunks S of size i of prod_{v in S} h_x(v)/h_S(v).
Rational trunk_hook_sum(const BasisElement& forest, unsigned i);

// ---------------------------------------------------------------- to-do list (FQSym)

ChainSpec todo_chain(const OperatorSpec& op, unsigned n, std::size_t cap = default_state_cap());
// Remove the first r letters, relabel the rest r+1..n, insert 1..r uniformly.
Stepper todo_stepper(const OperatorSpec& op, unsigned n);
// The same chain written out from the mechanics above, without the Hopf structure.
TransitionMatrix todo_matrix_direct(const OperatorSpec& op, unsigned n, std::size_t cap = default_state_cap());

// Smallest value not fixed, minus one; n for the identity.
unsigned first_moved_index(const Permutation& tau);
// +1 / -1 / 0 by the relative order of the last n - j letters; constant 1 for the identity.
Vector todo_eigenfunction_values(const Permutation& tau, const std::vector<BasisElement>& states);
// One right eigenfunction per permutation, each checked against k, and cross-checked
// against the dual-algebra construction.
std::vector<EigenFunction> fqsym_eigenbasis(const TransitionMatrix& k, const OperatorSpec& op, unsigned n);

// Observe std(last k letters).
StateMap last_letters_map(unsigned k);

struct PositionLaw {
  std::map<unsigned, Rational> closed_form;  // absolute position -> probability
  std::map<unsigned, Rational> exact;        // from the matrix power
  bool agree() const { return closed_form == exact; }
};
// Position of the smallest of sigma_{j+1..n} after t steps from the identity.
PositionLaw newest_position_distribution(unsigned n, unsigned j, unsigned t, const OperatorSpec& op);

// ---------------------------------------------------------------- shuffles and rocks

ChainSpec shuffle_chain(const PieceDistribution& p, const Word& deck, std::size_t cap = default_state_cap());
ChainSpec rock_chain(const PieceDistribution& p, unsigned n);

// P(largest part >= m after t steps of ter from lambda) against ((n-m)/n)^t sum_i binom(lambda_i, m).
BoundCheck rock_survival_bound(const IntPartition& lambda, unsigned m, unsigned t);

}  // namespace dchain
