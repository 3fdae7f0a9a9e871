#pragma once

#include "dchain/forest.hpp"
#include "dchain/fqsym.hpp"
#include "dchain/hopf.hpp"
#include "dchain/sym_e.hpp"
#include "dchain/words.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace dchain {

const HopfAlgebra& algebra_for(AlgebraId id);

class StateCapExceeded : public std::runtime_error {
 public:
  StateCapExceeded(std::size_t cap, std::size_t needed);
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

// 5000, or the value of DCHAIN_STATE_CAP when set to a positive integer.
std::size_t default_state_cap();

// Distinct rearrangements of a multiset of cards (shuffle or free associative).
struct DeckStates {
  Word deck;
};
// Every word of length n over the letters 1..alphabet.
struct AllWords {
  unsigned alphabet = 2;
  unsigned n = 0;
};
struct AllPermutations {
  unsigned n = 0;
};
struct AllPartitions {
  unsigned n = 0;
};
// Everything reachable from start under the support of m Delta_P.
struct ClosureStates {
  BasisElement start;
  PieceDistribution P;
};
using StateConfig = std::variant<DeckStates, AllWords, AllPermutations, AllPartitions, ClosureStates>;

// Canonically ordered state list; throws StateCapExceeded past the cap.
std::vector<BasisElement> enumerate_states(const HopfAlgebra& h, const StateConfig& config,
                                           std::size_t cap = default_state_cap());

// Dimension series 1, dim H_1, ..., dim H_max when it does not depend on a start state.
std::optional<std::vector<Integer>> dimension_series(const HopfAlgebra& h, const StateConfig& config, unsigned max_degree);

}  // namespace dchain
