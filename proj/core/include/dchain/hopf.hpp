#pragma once

#include "dchain/rational.hpp"

#include <nlohmann/json.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dchain {

enum class AlgebraId : std::uint8_t {
  shuffle,
  free_associative,
  fqsym,
  fqsym_dual,
  connes_kreimer,
  sym_e,
  other,
};

std::string_view algebra_name(AlgebraId id);
AlgebraId algebra_from_name(std::string_view name);

// A basis vector: the algebra it lives in plus a canonical byte string for the
// combinatorial object. Equal objects have equal payloads.
struct BasisElement {
  AlgebraId algebra = AlgebraId::other;
  unsigned degree = 0;
  std::string payload;

  friend bool operator==(const BasisElement&, const BasisElement&) = default;
  friend std::strong_ordering operator<=>(const BasisElement& a, const BasisElement& b) {
    if (auto c = a.degree <=> b.degree; c != 0) return c;
    if (auto c = a.payload.compare(b.payload); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.algebra <=> b.algebra;
  }
};

struct BasisElementHash {
  std::size_t operator()(const BasisElement& b) const noexcept {
    return std::hash<std::string>{}(b.payload) ^ (std::size_t(b.degree) * 0x9e3779b97f4a7c15ULL) ^ std::size_t(b.algebra);
  }
};

using Tensor = std::vector<BasisElement>;

struct WeakComposition {
  std::vector<unsigned> parts;

  WeakComposition() = default;
  WeakComposition(std::initializer_list<unsigned> p) : parts(p) {}
  explicit WeakComposition(std::vector<unsigned> p) : parts(std::move(p)) {}

  unsigned total() const;
  std::size_t length() const { return parts.size(); }
  WeakComposition normalized() const;
  bool is_normalized() const;
  std::string to_string() const;

  friend bool operator==(const WeakComposition&, const WeakComposition&) = default;
  friend auto operator<=>(const WeakComposition&, const WeakComposition&) = default;
};

// Multinomial coefficient binom(n; d_1, ..., d_l).
Integer multinomial(const WeakComposition& d);

// Elements that may share a linear combination.
inline bool same_family(const BasisElement& a, const BasisElement& b) { return a.algebra == b.algebra; }
inline bool same_family(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].algebra != b[i].algebra) return false;
  return true;
}
inline bool same_family(const WeakComposition& a, const WeakComposition& b) { return a.total() == b.total(); }

// Finitely supported rational combination; zero coefficients are never stored.
template <class Key>
class LinearCombination {
 public:
  using Map = std::map<Key, Rational>;
  using const_iterator = typename Map::const_iterator;

  LinearCombination() = default;
  explicit LinearCombination(const Key& k, const Rational& c = Rational(1)) { add(k, c); }

  void add(const Key& k, const Rational& c) {
    if (c == 0) return;
    if (!terms_.empty() && !same_family(terms_.begin()->first, k))
      throw ContractError("mixing incompatible terms in one linear combination");
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational coefficient_sum() const {
    Rational s(0);
    for (const auto& [k, c] : terms_) s += c;
    return s;
  }

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }
  const Map& terms() const { return terms_; }

  LinearCombination& operator+=(const LinearCombination& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  LinearCombination& operator-=(const LinearCombination& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  LinearCombination& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [k, c] : terms_) c *= s;
    }
    return *this;
  }
  void add_scaled(const LinearCombination& o, const Rational& s) {
    if (s == 0) return;
    for (const auto& [k, c] : o.terms_) add(k, c * s);
  }

  friend LinearCombination operator+(LinearCombination a, const LinearCombination& b) { return a += b; }
  friend LinearCombination operator-(LinearCombination a, const LinearCombination& b) { return a -= b; }
  friend LinearCombination operator*(const Rational& s, LinearCombination a) { return a *= s; }
  friend bool operator==(const LinearCombination&, const LinearCombination&) = default;

 private:
  Map terms_;
};

using Element = LinearCombination<BasisElement>;
using TensorSum = LinearCombination<Tensor>;
// Formal combination of complete noncommutative symmetric functions S^D.
using CompositionSum = LinearCombination<WeakComposition>;

// Merges compositions that agree after dropping zero parts.
CompositionSum normalize(const CompositionSum& f);

// A probability distribution on weak compositions of n. Keys are kept exactly as
// given; the operator it drives only sees the zero-free versions.
class PieceDistribution {
 public:
  PieceDistribution(unsigned n, std::map<WeakComposition, Rational> weights);

  static PieceDistribution point(const WeakComposition& d);
  // Inverse of operator_sum: P(D) = coefficient * binom(n, D).
  static PieceDistribution from_operator(unsigned n, const CompositionSum& s);

  unsigned n() const { return n_; }
  const std::map<WeakComposition, Rational>& weights() const { return weights_; }

  // S^P = sum_D P(D) / binom(n, D) S^D, zero parts dropped.
  CompositionSum operator_sum() const;
  // alpha * this + (1 - alpha) * other
  PieceDistribution mixture(const Rational& alpha, const PieceDistribution& other) const;

  friend bool operator==(const PieceDistribution&, const PieceDistribution&) = default;

 private:
  unsigned n_ = 0;
  std::map<WeakComposition, Rational> weights_;
};

struct CoproductTerm {
  BasisElement left;
  BasisElement right;
  Rational coefficient;
};

// A graded connected Hopf algebra given by a product of two basis elements and
// the single-split components of the coproduct. Refined coproducts and eta are
// derived here and memoised; the caches are safe for concurrent readers.
class HopfAlgebra {
 public:
  virtual ~HopfAlgebra() = default;

  virtual AlgebraId id() const = 0;
  virtual bool commutative() const = 0;
  virtual bool cocommutative() const = 0;
  // Free commutative with the basis being the monomials in its generators.
  virtual bool free_commutative() const { return false; }

  virtual nlohmann::json to_json(const BasisElement& b) const = 0;
  virtual BasisElement from_json(const nlohmann::json& j) const = 0;
  virtual std::string to_text(const BasisElement& b) const = 0;

  BasisElement unit() const { return BasisElement{id(), 0, {}}; }

  Element product(const BasisElement& a, const BasisElement& b) const;
  Element product(std::span<const BasisElement> factors) const;
  Element product(const Element& a, const Element& b) const;

  // Degree (i, deg x - i) part of the coproduct of x.
  std::vector<CoproductTerm> coproduct(const BasisElement& x, unsigned left_degree) const;

  // Iterated coproduct projected to degrees D (zero parts give the unit in that slot).
  TensorSum refined_coproduct(const BasisElement& x, const WeakComposition& d) const;
  // Coefficient sum of the refined coproduct at (1, ..., 1).
  Rational eta(const BasisElement& x) const;

 protected:
  // Both factors have positive degree.
  virtual Element do_product(const BasisElement& a, const BasisElement& b) const = 0;
  // 0 < left_degree < deg x.
  virtual std::vector<CoproductTerm> do_coproduct(const BasisElement& x, unsigned left_degree) const = 0;

  void check_own(const BasisElement& b) const;

 private:
  struct RefinedKey {
    BasisElement x;
    std::vector<unsigned> parts;
    friend bool operator==(const RefinedKey&, const RefinedKey&) = default;
  };
  struct RefinedKeyHash {
    std::size_t operator()(const RefinedKey& k) const noexcept;
  };

  const TensorSum& refined_normalized(const BasisElement& x, std::span<const unsigned> parts) const;

  mutable std::shared_mutex cache_mutex_;
  mutable std::unordered_map<RefinedKey, std::unique_ptr<const TensorSum>, RefinedKeyHash> refined_cache_;
  mutable std::unordered_map<BasisElement, Rational, BasisElementHash> eta_cache_;
};

// Linear extension helpers.
TensorSum refined_coproduct(const HopfAlgebra& h, const Element& x, const WeakComposition& d);

// m Delta_D.
Element descent_operator_D(const HopfAlgebra& h, const BasisElement& x, const WeakComposition& d);
Element descent_operator_D(const HopfAlgebra& h, const Element& x, const WeakComposition& d);
// m Delta_P = sum_D P(D)/binom(n,D) m Delta_D.
Element descent_operator_P(const HopfAlgebra& h, const BasisElement& x, const PieceDistribution& p);
Element descent_operator_P(const HopfAlgebra& h, const Element& x, const PieceDistribution& p);
// Image of an arbitrary combination of S^D.
Element descent_operator(const HopfAlgebra& h, const BasisElement& x, const CompositionSum& s);
Element descent_operator(const HopfAlgebra& h, const Element& x, const CompositionSum& s);

Rational eta(const HopfAlgebra& h, const BasisElement& x);

enum class Orientation { commutative, cocommutative };

// D''(M) for every matrix with row sums D and column sums D', zero parts kept.
std::vector<WeakComposition> compose_descent_terms(const WeakComposition& d, const WeakComposition& d2,
                                                   Orientation orientation);
// The composite m Delta_D o m Delta_D' as a zero-free CompositionSum.
CompositionSum compose_descent(const WeakComposition& d, const WeakComposition& d2, Orientation orientation);
// theta(F) o theta(G), bilinear in F and G.
CompositionSum internal_product(const CompositionSum& f, const CompositionSum& g, Orientation orientation);

// Canonical JSON: {"algebra": id, "terms": [{"state": ..., "num": "...", "den": "..."}]}.
nlohmann::json element_to_json(const HopfAlgebra& h, const Element& e);
Element element_from_json(const HopfAlgebra& h, const nlohmann::json& j);
nlohmann::json composition_sum_to_json(const CompositionSum& s);
CompositionSum composition_sum_from_json(const nlohmann::json& j);

std::string element_to_text(const HopfAlgebra& h, const Element& e);

}  // namespace dchain
