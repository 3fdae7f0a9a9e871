#include "dchain/distributions.hpp"

#include <map>

namespace dchain {

namespace {

void check_probability(const Rational& q, const char* what) {
  if (q < 0 || q > 1) throw ContractError(std::string(what) + " must lie in [0,1]");
}

WeakComposition ones_then(unsigned r, unsigned rest) {
  WeakComposition d;
  if (r == 0) d.parts.push_back(0);
  for (unsigned i = 0; i < r; ++i) d.parts.push_back(1);
  d.parts.push_back(rest);
  return d;
}

constexpr std::pair<OperatorKind, std::string_view> kNames[] = {
    {OperatorKind::identity, "identity"}, {OperatorKind::riffle, "riffle"},
    {OperatorKind::ter, "ter"},           {OperatorKind::trer, "trer"},
    {OperatorKind::binter, "binter"},     {OperatorKind::tober, "tober"},
    {OperatorKind::bintobrer, "bintobrer"}, {OperatorKind::trintober, "trintober"},
    {OperatorKind::taber, "taber"},       {OperatorKind::tabrer, "tabrer"},
};

}  // namespace

WeakComposition padded_composition(unsigned a, unsigned middle, unsigned b) {
  WeakComposition d;
  if (a == 0) d.parts.push_back(0);
  for (unsigned i = 0; i < a; ++i) d.parts.push_back(1);
  d.parts.push_back(middle);
  if (b == 0) d.parts.push_back(0);
  for (unsigned i = 0; i < b; ++i) d.parts.push_back(1);
  return d;
}

PieceDistribution identity_distribution(unsigned n) { return PieceDistribution::point(WeakComposition{n}); }

PieceDistribution riffle_distribution(unsigned n) {
  std::map<WeakComposition, Rational> w;
  Integer two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, n);
  for (unsigned i = 0; i <= n; ++i) w[WeakComposition{i, n - i}] = Rational(binomial(n, i), two_n);
  for (auto& [d, x] : w) x.canonicalize();
  return PieceDistribution(n, std::move(w));
}

PieceDistribution top_to_random(unsigned n) {
  if (n == 0) throw ContractError("top-to-random needs n >= 1");
  return PieceDistribution::point(WeakComposition{1, n - 1});
}

PieceDistribution top_r_to_random(unsigned n, unsigned r) {
  if (r > n) throw ContractError("top-r-to-random needs r <= n");
  return PieceDistribution::point(ones_then(r, n - r));
}

PieceDistribution binomial_top_to_random(unsigned n, const Rational& q2) {
  check_probability(q2, "q2");
  std::map<WeakComposition, Rational> w;
  for (unsigned r = 0; r <= n; ++r)
    w[ones_then(r, n - r)] += Rational(binomial(n, r)) * rational_pow(1 - q2, r) * rational_pow(q2, n - r);
  return PieceDistribution(n, std::move(w));
}

PieceDistribution top_or_bottom_to_random(unsigned n, const Rational& q) {
  check_probability(q, "q");
  if (n == 0) throw ContractError("top-or-bottom-to-random needs n >= 1");
  std::map<WeakComposition, Rational> w;
  w[WeakComposition{1, n - 1}] += q;
  w[WeakComposition{n - 1, 1}] += 1 - q;
  return PieceDistribution(n, std::move(w));
}

PieceDistribution binomial_top_or_bottom_r(unsigned n, const Rational& q, unsigned r) {
  check_probability(q, "q");
  if (r > n) throw ContractError("bintobrer needs r <= n");
  std::map<WeakComposition, Rational> w;
  for (unsigned r1 = 0; r1 <= r; ++r1)
    w[padded_composition(r1, n - r, r - r1)] += Rational(binomial(r, r1)) * rational_pow(q, r1) * rational_pow(1 - q, r - r1);
  return PieceDistribution(n, std::move(w));
}

PieceDistribution trinomial_top_or_bottom(unsigned n, const Rational& q1, const Rational& q2, const Rational& q3) {
  check_probability(q1, "q1");
  check_probability(q2, "q2");
  check_probability(q3, "q3");
  if (q1 + q2 + q3 != 1) throw ContractError("q1 + q2 + q3 must equal 1");
  std::map<WeakComposition, Rational> w;
  for (unsigned r1 = 0; r1 <= n; ++r1)
    for (unsigned r3 = 0; r1 + r3 <= n; ++r3) {
      const unsigned r2 = n - r1 - r3;
      Rational coeff(factorial(n), factorial(r1) * factorial(r2) * factorial(r3));
      coeff.canonicalize();
      w[padded_composition(r1, r2, r3)] += coeff * rational_pow(q1, r1) * rational_pow(q2, r2) * rational_pow(q3, r3);
    }
  return PieceDistribution(n, std::move(w));
}

PieceDistribution top_and_bottom_to_random(unsigned n) { return top_and_bottom_r(n, 1); }

PieceDistribution top_and_bottom_r(unsigned n, unsigned r) {
  if (2 * r > n) throw ContractError("top-and-bottom-r-to-random needs 2r <= n");
  return PieceDistribution::point(padded_composition(r, n - 2 * r, r));
}

OperatorKind operator_kind_from_name(std::string_view name) {
  for (const auto& [k, v] : kNames)
    if (v == name) return k;
  throw ContractError("unknown operator kind '" + std::string(name) + "'");
}

std::string_view operator_kind_name(OperatorKind kind) {
  for (const auto& [k, v] : kNames)
    if (k == kind) return v;
  return "?";
}

PieceDistribution OperatorSpec::distribution(unsigned n) const {
  switch (kind) {
    case OperatorKind::identity: return identity_distribution(n);
    case OperatorKind::riffle: return riffle_distribution(n);
    case OperatorKind::ter: return top_to_random(n);
    case OperatorKind::trer: return top_r_to_random(n, r);
    case OperatorKind::binter: return binomial_top_to_random(n, q2);
    case OperatorKind::tober: return top_or_bottom_to_random(n, q);
    case OperatorKind::bintobrer: return binomial_top_or_bottom_r(n, q, r);
    case OperatorKind::trintober: return trinomial_top_or_bottom(n, q1, q2, q3);
    case OperatorKind::taber: return top_and_bottom_to_random(n);
    case OperatorKind::tabrer: return top_and_bottom_r(n, r);
  }
  throw ContractError("unknown operator kind");
}

std::string OperatorSpec::name() const {
  std::string s(operator_kind_name(kind));
  switch (kind) {
    case OperatorKind::trer:
    case OperatorKind::tabrer: return s + "(r=" + std::to_string(r) + ")";
    case OperatorKind::binter: return s + "(q2=" + q2.get_str() + ")";
    case OperatorKind::tober: return s + "(q=" + q.get_str() + ")";
    case OperatorKind::bintobrer: return s + "(q=" + q.get_str() + ",r=" + std::to_string(r) + ")";
    case OperatorKind::trintober: return s + "(q1=" + q1.get_str() + ",q2=" + q2.get_str() + ",q3=" + q3.get_str() + ")";
    default: return s;
  }
}

bool OperatorSpec::top_to_random_family() const {
  return kind != OperatorKind::identity && kind != OperatorKind::riffle;
}

bool OperatorSpec::two_sided() const {
  return kind == OperatorKind::tober || kind == OperatorKind::bintobrer || kind == OperatorKind::trintober ||
         kind == OperatorKind::taber || kind == OperatorKind::tabrer;
}

Rational OperatorSpec::family_eigenvalue(unsigned n, unsigned j) const {
  if (j > n) throw ContractError("eigenvalue index exceeds degree");
  auto ratio = [&](unsigned k) {
    if (k > n) throw ContractError("operator removes more cards than the degree");
    Rational v(falling_factorial(j, k), falling_factorial(n, k));
    v.canonicalize();
    return v;
  };
  switch (kind) {
    case OperatorKind::ter:
    case OperatorKind::tober: return ratio(1);
    case OperatorKind::trer:
    case OperatorKind::bintobrer: return ratio(r);
    case OperatorKind::binter:
    case OperatorKind::trintober: return rational_pow(q2, n - j);
    case OperatorKind::taber: return ratio(2);
    case OperatorKind::tabrer: return ratio(2 * r);
    default: break;
  }
  throw ContractError("operator is not in the top/bottom-to-random family");
}

}  // namespace dchain
