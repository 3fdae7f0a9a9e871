#include "dchain/hopf.hpp"

#include <mutex>
#include <numeric>
#include <sstream>

namespace dchain {

namespace {

constexpr std::pair<AlgebraId, std::string_view> kAlgebraNames[] = {
    {AlgebraId::shuffle, "shuffle"},
    {AlgebraId::free_associative, "free-associative"},
    {AlgebraId::fqsym, "fqsym"},
    {AlgebraId::fqsym_dual, "fqsym-dual"},
    {AlgebraId::connes_kreimer, "connes-kreimer"},
    {AlgebraId::sym_e, "sym-e"},
    {AlgebraId::other, "other"},
};

}  // namespace

std::string_view algebra_name(AlgebraId id) {
  for (const auto& [k, v] : kAlgebraNames)
    if (k == id) return v;
  return "other";
}

AlgebraId algebra_from_name(std::string_view name) {
  for (const auto& [k, v] : kAlgebraNames)
    if (v == name) return k;
  throw ContractError("unknown algebra '" + std::string(name) + "'");
}

unsigned WeakComposition::total() const { return std::accumulate(parts.begin(), parts.end(), 0u); }

WeakComposition WeakComposition::normalized() const {
  WeakComposition r;
  for (unsigned p : parts)
    if (p) r.parts.push_back(p);
  return r;
}

bool WeakComposition::is_normalized() const {
  for (unsigned p : parts)
    if (!p) return false;
  return true;
}

std::string WeakComposition::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts[i]);
  }
  return s + ")";
}

Integer multinomial(const WeakComposition& d) {
  Integer r = factorial(d.total());
  for (unsigned p : d.parts) r /= factorial(p);
  return r;
}

CompositionSum normalize(const CompositionSum& f) {
  CompositionSum r;
  for (const auto& [d, c] : f) r.add(d.normalized(), c);
  return r;
}

// ---------------------------------------------------------------- PieceDistribution

PieceDistribution::PieceDistribution(unsigned n, std::map<WeakComposition, Rational> weights) : n_(n) {
  Rational total(0);
  for (auto& [d, w] : weights) {
    if (d.total() != n) throw ContractError("composition " + d.to_string() + " does not sum to " + std::to_string(n));
    if (w < 0) throw ContractError("negative weight on " + d.to_string());
    total += w;
    if (w != 0) weights_.emplace(d, w);
  }
  if (total != 1) throw ContractError("piece distribution weights sum to " + fraction_string(total) + ", not 1");
}

PieceDistribution PieceDistribution::point(const WeakComposition& d) { return PieceDistribution(d.total(), {{d, Rational(1)}}); }

PieceDistribution PieceDistribution::from_operator(unsigned n, const CompositionSum& s) {
  std::map<WeakComposition, Rational> w;
  for (const auto& [d, c] : s) w[d] += c * Rational(multinomial(d));
  return PieceDistribution(n, std::move(w));
}

CompositionSum PieceDistribution::operator_sum() const {
  CompositionSum s;
  for (const auto& [d, w] : weights_) s.add(d.normalized(), w / Rational(multinomial(d)));
  return s;
}

PieceDistribution PieceDistribution::mixture(const Rational& alpha, const PieceDistribution& other) const {
  if (other.n_ != n_) throw ContractError("mixing piece distributions of different degrees");
  if (alpha < 0 || alpha > 1) throw ContractError("mixture weight outside [0,1]");
  std::map<WeakComposition, Rational> w;
  for (const auto& [d, x] : weights_) w[d] += alpha * x;
  for (const auto& [d, x] : other.weights_) w[d] += (1 - alpha) * x;
  return PieceDistribution(n_, std::move(w));
}

// ---------------------------------------------------------------- HopfAlgebra

void HopfAlgebra::check_own(const BasisElement& b) const {
  if (b.algebra != id())
    throw ContractError("basis element of " + std::string(algebra_name(b.algebra)) + " given to " +
                        std::string(algebra_name(id())));
}

Element HopfAlgebra::product(const BasisElement& a, const BasisElement& b) const {
  check_own(a);
  check_own(b);
  if (a.degree == 0) return Element(b);
  if (b.degree == 0) return Element(a);
  return do_product(a, b);
}

Element HopfAlgebra::product(std::span<const BasisElement> factors) const {
  Element acc(unit());
  for (const auto& f : factors) {
    Element next;
    for (const auto& [a, c] : acc) next.add_scaled(product(a, f), c);
    acc = std::move(next);
  }
  return acc;
}

Element HopfAlgebra::product(const Element& a, const Element& b) const {
  Element r;
  for (const auto& [x, cx] : a)
    for (const auto& [y, cy] : b) r.add_scaled(product(x, y), cx * cy);
  return r;
}

std::vector<CoproductTerm> HopfAlgebra::coproduct(const BasisElement& x, unsigned left_degree) const {
  check_own(x);
  if (left_degree > x.degree)
    throw ContractError("coproduct split " + std::to_string(left_degree) + " exceeds degree " + std::to_string(x.degree));
  if (left_degree == 0) return {{unit(), x, Rational(1)}};
  if (left_degree == x.degree) return {{x, unit(), Rational(1)}};
  return do_coproduct(x, left_degree);
}

std::size_t HopfAlgebra::RefinedKeyHash::operator()(const RefinedKey& k) const noexcept {
  std::size_t h = BasisElementHash{}(k.x);
  for (unsigned p : k.parts) h = h * 1000003u + p;
  return h;
}

const TensorSum& HopfAlgebra::refined_normalized(const BasisElement& x, std::span<const unsigned> parts) const {
  RefinedKey key{x, std::vector<unsigned>(parts.begin(), parts.end())};
  {
    std::shared_lock lock(cache_mutex_);
    auto it = refined_cache_.find(key);
    if (it != refined_cache_.end()) return *it->second;
  }
  auto result = std::make_unique<TensorSum>();
  if (parts.empty()) {
    result->add(Tensor{}, Rational(1));
  } else if (parts.size() == 1) {
    result->add(Tensor{x}, Rational(1));
  } else {
    for (const auto& term : coproduct(x, parts[0])) {
      const TensorSum& rest = refined_normalized(term.right, parts.subspan(1));
      for (const auto& [tuple, c] : rest) {
        Tensor t;
        t.reserve(tuple.size() + 1);
        t.push_back(term.left);
        t.insert(t.end(), tuple.begin(), tuple.end());
        result->add(t, c * term.coefficient);
      }
    }
  }
  std::unique_lock lock(cache_mutex_);
  auto [it, inserted] = refined_cache_.try_emplace(std::move(key), std::move(result));
  return *it->second;
}

TensorSum HopfAlgebra::refined_coproduct(const BasisElement& x, const WeakComposition& d) const {
  check_own(x);
  if (d.total() != x.degree)
    throw ContractError("refined coproduct: composition " + d.to_string() + " does not match degree " +
                        std::to_string(x.degree));
  WeakComposition nz = d.normalized();
  const TensorSum& core = refined_normalized(x, nz.parts);
  if (nz.parts.size() == d.parts.size()) return core;
  TensorSum out;
  const BasisElement one = unit();
  for (const auto& [tuple, c] : core) {
    Tensor t;
    std::size_t k = 0;
    for (unsigned p : d.parts) t.push_back(p == 0 ? one : tuple[k++]);
    out.add(t, c);
  }
  return out;
}

Rational HopfAlgebra::eta(const BasisElement& x) const {
  check_own(x);
  if (x.degree <= 1) return Rational(1);
  {
    std::shared_lock lock(cache_mutex_);
    auto it = eta_cache_.find(x);
    if (it != eta_cache_.end()) return it->second;
  }
  Rational value(0);
  for (const auto& term : coproduct(x, 1)) value += term.coefficient * eta(term.right);
  std::unique_lock lock(cache_mutex_);
  eta_cache_.try_emplace(x, value);
  return value;
}

// ---------------------------------------------------------------- free functions

TensorSum refined_coproduct(const HopfAlgebra& h, const Element& x, const WeakComposition& d) {
  TensorSum r;
  for (const auto& [b, c] : x) r.add_scaled(h.refined_coproduct(b, d), c);
  return r;
}

Element descent_operator_D(const HopfAlgebra& h, const BasisElement& x, const WeakComposition& d) {
  TensorSum pieces = h.refined_coproduct(x, d.normalized());
  Element r;
  for (const auto& [tuple, c] : pieces) r.add_scaled(h.product(tuple), c);
  return r;
}

Element descent_operator_D(const HopfAlgebra& h, const Element& x, const WeakComposition& d) {
  Element r;
  for (const auto& [b, c] : x) r.add_scaled(descent_operator_D(h, b, d), c);
  return r;
}

Element descent_operator(const HopfAlgebra& h, const BasisElement& x, const CompositionSum& s) {
  Element r;
  for (const auto& [d, c] : s) r.add_scaled(descent_operator_D(h, x, d), c);
  return r;
}

Element descent_operator(const HopfAlgebra& h, const Element& x, const CompositionSum& s) {
  Element r;
  for (const auto& [b, c] : x) r.add_scaled(descent_operator(h, b, s), c);
  return r;
}

Element descent_operator_P(const HopfAlgebra& h, const BasisElement& x, const PieceDistribution& p) {
  if (x.degree != p.n())
    throw ContractError("descent operator of degree " + std::to_string(p.n()) + " applied to degree " +
                        std::to_string(x.degree));
  return descent_operator(h, x, p.operator_sum());
}

Element descent_operator_P(const HopfAlgebra& h, const Element& x, const PieceDistribution& p) {
  Element r;
  for (const auto& [b, c] : x) r.add_scaled(descent_operator_P(h, b, p), c);
  return r;
}

Rational eta(const HopfAlgebra& h, const BasisElement& x) { return h.eta(x); }

namespace {

void fill_matrices(const std::vector<unsigned>& rows, std::vector<unsigned>& col_left, std::size_t r, std::size_t c,
                   unsigned row_left, std::vector<std::vector<unsigned>>& m,
                   const std::function<void(const std::vector<std::vector<unsigned>>&)>& emit) {
  const std::size_t nr = rows.size(), nc = col_left.size();
  if (r == nr) {
    for (unsigned left : col_left)
      if (left) return;
    emit(m);
    return;
  }
  if (c + 1 == nc) {
    // The last column absorbs what is left of this row.
    if (row_left > col_left[c]) return;
    m[r][c] = row_left;
    col_left[c] -= row_left;
    fill_matrices(rows, col_left, r + 1, 0, r + 1 < nr ? rows[r + 1] : 0, m, emit);
    col_left[c] += row_left;
    return;
  }
  for (unsigned v = 0; v <= std::min(row_left, col_left[c]); ++v) {
    m[r][c] = v;
    col_left[c] -= v;
    fill_matrices(rows, col_left, r, c + 1, row_left - v, m, emit);
    col_left[c] += v;
  }
}

}  // namespace

std::vector<WeakComposition> compose_descent_terms(const WeakComposition& d, const WeakComposition& d2,
                                                   Orientation orientation) {
  if (d.total() != d2.total())
    throw ContractError("composing descent operators of degrees " + std::to_string(d.total()) + " and " +
                        std::to_string(d2.total()));
  std::vector<WeakComposition> out;
  if (d.parts.empty() || d2.parts.empty()) {
    out.emplace_back();
    return out;
  }
  std::vector<unsigned> cols = d2.parts;
  std::vector<std::vector<unsigned>> m(d.parts.size(), std::vector<unsigned>(cols.size(), 0));
  fill_matrices(d.parts, cols, 0, 0, d.parts[0], m, [&](const std::vector<std::vector<unsigned>>& mat) {
    WeakComposition w;
    const std::size_t nr = mat.size(), nc = mat[0].size();
    if (orientation == Orientation::commutative) {
      for (std::size_t j = 0; j < nc; ++j)
        for (std::size_t i = 0; i < nr; ++i) w.parts.push_back(mat[i][j]);
    } else {
      for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) w.parts.push_back(mat[i][j]);
    }
    out.push_back(std::move(w));
  });
  return out;
}

CompositionSum compose_descent(const WeakComposition& d, const WeakComposition& d2, Orientation orientation) {
  CompositionSum s;
  for (const auto& w : compose_descent_terms(d, d2, orientation)) s.add(w.normalized(), Rational(1));
  return s;
}

CompositionSum internal_product(const CompositionSum& f, const CompositionSum& g, Orientation orientation) {
  CompositionSum r;
  for (const auto& [d, cf] : f)
    for (const auto& [d2, cg] : g) r.add_scaled(compose_descent(d, d2, orientation), cf * cg);
  return r;
}

// ---------------------------------------------------------------- serialisation

nlohmann::json element_to_json(const HopfAlgebra& h, const Element& e) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [b, c] : e)
    terms.push_back({{"state", h.to_json(b)}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  return {{"algebra", std::string(algebra_name(h.id()))}, {"terms", terms}};
}

namespace {

Rational coefficient_from_json(const nlohmann::json& t) {
  return parse_rational(t.at("num").get<std::string>() + "/" + t.at("den").get<std::string>());
}

}  // namespace

Element element_from_json(const HopfAlgebra& h, const nlohmann::json& j) {
  if (algebra_from_name(j.at("algebra").get<std::string>()) != h.id())
    throw ContractError("element JSON belongs to a different algebra");
  Element e;
  for (const auto& t : j.at("terms")) e.add(h.from_json(t.at("state")), coefficient_from_json(t));
  return e;
}

nlohmann::json composition_sum_to_json(const CompositionSum& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [d, c] : s)
    terms.push_back({{"state", d.parts}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  return {{"algebra", "nsym"}, {"terms", terms}};
}

CompositionSum composition_sum_from_json(const nlohmann::json& j) {
  if (j.at("algebra").get<std::string>() != "nsym") throw ContractError("composition sum JSON must use algebra \"nsym\"");
  CompositionSum s;
  for (const auto& t : j.at("terms"))
    s.add(WeakComposition(t.at("state").get<std::vector<unsigned>>()), coefficient_from_json(t));
  return s;
}

std::string element_to_text(const HopfAlgebra& h, const Element& e) {
  if (e.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [b, c] : e) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c.get_str() << "*";
    os << h.to_text(b);
  }
  return os.str();
}

}  // namespace dchain
