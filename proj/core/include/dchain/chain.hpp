#pragma once

#include "dchain/algebras.hpp"
#include "dchain/hopf.hpp"
#include "dchain/linalg.hpp"
#include "dchain/rng.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dchain {

struct ChainSpec {
  const HopfAlgebra* algebra = nullptr;
  PieceDistribution P;
  std::vector<BasisElement> states;
};

ChainSpec make_chain(const HopfAlgebra& h, const PieceDistribution& p, const StateConfig& config,
                     std::size_t cap = default_state_cap());

// Rows index the source state. Every entry is >= 0 and every row sums to exactly 1.
class TransitionMatrix {
 public:
  using Row = std::map<std::size_t, Rational>;

  TransitionMatrix(std::vector<BasisElement> states, std::vector<Row> rows);

  const std::vector<BasisElement>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const Row& row(std::size_t i) const { return rows_.at(i); }
  Rational entry(std::size_t i, std::size_t j) const;
  std::optional<std::size_t> index_of(const BasisElement& b) const;
  std::size_t require_index(const BasisElement& b) const;

  TransitionMatrix operator*(const TransitionMatrix& o) const;
  Vector apply(const Vector& f) const;        // (K f)(x) = sum_y K(x,y) f(y)
  Vector apply_left(const Vector& mu) const;  // (mu K)(y)
  DenseMatrix dense() const;
  static TransitionMatrix from_dense(std::vector<BasisElement> states, const DenseMatrix& m);

  friend bool operator==(const TransitionMatrix& a, const TransitionMatrix& b) {
    return a.states_ == b.states_ && a.rows_ == b.rows_;
  }

 private:
  std::vector<BasisElement> states_;
  std::vector<Row> rows_;
  std::map<BasisElement, std::size_t> index_;
};

// Raised when the chain's support leaves the state list or a structure constant is negative.
class ChainError : public std::runtime_error {
 public:
  ChainError(const std::string& what, BasisElement state, Element offending = {});
  const BasisElement& state() const { return state_; }
  const Element& offending() const { return offending_; }

 private:
  BasisElement state_;
  Element offending_;
};

struct ValidationReport {
  bool valid = true;
  std::string witness;
  std::optional<BasisElement> state;
};

ValidationReport validate_state_space_basis(const ChainSpec& spec);

// K(x,y) = eta(y)/eta(x) * coefficient of y in m Delta_P(x).
TransitionMatrix build_transition_matrix(const ChainSpec& spec);
// Same, for any descent operator given as a combination of S^D.
TransitionMatrix build_transition_matrix(const HopfAlgebra& h, const CompositionSum& op,
                                         const std::vector<BasisElement>& states);

// Choose D ~ P, then a coproduct term, then a product term (each with its eta-weighted law).
BasisElement step_sample(const ChainSpec& spec, const BasisElement& x, CounterRng& rng);

Vector distribution_vector_at_time(const TransitionMatrix& k, std::size_t start, unsigned t);
std::map<BasisElement, Rational> distribution_at_time(const TransitionMatrix& k, const BasisElement& x0, unsigned t);

struct LumpViolation {
  BasisElement first;
  BasisElement second;
  BasisElement target_class;
  Rational first_mass;
  Rational second_mass;
};
using LumpResult = std::variant<TransitionMatrix, LumpViolation>;
using StateMap = std::function<BasisElement(const BasisElement&)>;

// Dynkin check: within each fibre of theta, the mass sent to every fibre is constant.
LumpResult lump(const TransitionMatrix& k, const StateMap& theta);

std::vector<std::size_t> absorbing_states(const TransitionMatrix& k);
Rational absorption_probability(const TransitionMatrix& k, const BasisElement& x0, unsigned t);

// In a free commutative algebra: is y a product of degree-one generators?
bool is_degree_one_monomial(const HopfAlgebra& h, const BasisElement& y);
// t-fold internal power of S^P paired against x0 through zeta; needs a free commutative algebra.
Rational absorption_via_qsym(const ChainSpec& spec, const BasisElement& x0, unsigned t);

struct BalanceReport {
  bool holds = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};
BalanceReport detailed_balance_check(const TransitionMatrix& k, const Vector& pi);

}  // namespace dchain
