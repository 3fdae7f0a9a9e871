#include "dchain/chain.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace dchain {

// ---------------------------------------------------------------- RNG

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + kGamma))) {}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return mix(key_ + counter_ * kGamma);
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw ContractError("empty range");
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t v;
  do v = (*this)();
  while (v >= limit);
  return v % bound;
}

Rational CounterRng::uniform_rational() {
  static const Integer two53 = [] {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, 53);
    return p;
  }();
  Rational r(Integer(static_cast<unsigned long>((*this)() >> 11)), two53);
  r.canonicalize();
  return r;
}

double CounterRng::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::size_t sample_index(const std::vector<Rational>& weights, CounterRng& rng) {
  Rational total(0);
  for (const auto& w : weights) {
    if (w < 0) throw ContractError("negative sampling weight");
    total += w;
  }
  if (total <= 0) throw ContractError("sampling weights sum to zero");
  const Rational u = rng.uniform_rational() * total;
  Rational acc(0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

// ---------------------------------------------------------------- TransitionMatrix

TransitionMatrix::TransitionMatrix(std::vector<BasisElement> states, std::vector<Row> rows)
    : states_(std::move(states)), rows_(std::move(rows)) {
  if (rows_.size() != states_.size()) throw ContractError("transition matrix needs one row per state");
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (!index_.emplace(states_[i], i).second) throw ContractError("duplicate state in transition matrix");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Rational sum(0);
    for (auto it = rows_[i].begin(); it != rows_[i].end();) {
      if (it->first >= states_.size()) throw ContractError("transition matrix column out of range");
      if (it->second < 0) throw ContractError("negative transition probability in row " + std::to_string(i));
      sum += it->second;
      it = it->second == 0 ? rows_[i].erase(it) : std::next(it);
    }
    if (sum != 1) throw ContractError("row " + std::to_string(i) + " sums to " + fraction_string(sum));
  }
}

Rational TransitionMatrix::entry(std::size_t i, std::size_t j) const {
  const Row& r = rows_.at(i);
  auto it = r.find(j);
  return it == r.end() ? Rational(0) : it->second;
}

std::optional<std::size_t> TransitionMatrix::index_of(const BasisElement& b) const {
  auto it = index_.find(b);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TransitionMatrix::require_index(const BasisElement& b) const {
  auto i = index_of(b);
  if (!i) throw ContractError("state is not in the state list");
  return *i;
}

TransitionMatrix TransitionMatrix::operator*(const TransitionMatrix& o) const {
  if (states_ != o.states_) throw ContractError("multiplying transition matrices on different state lists");
  std::vector<Row> rows(size());
  for (std::size_t i = 0; i < size(); ++i)
    for (const auto& [k, a] : rows_[i])
      for (const auto& [j, b] : o.rows_[k]) rows[i][j] += a * b;
  return TransitionMatrix(states_, std::move(rows));
}

Vector TransitionMatrix::apply(const Vector& f) const {
  if (f.size() != size()) throw ContractError("function length differs from the state count");
  Vector r(size());
  for (std::size_t i = 0; i < size(); ++i)
    for (const auto& [j, p] : rows_[i]) r[i] += p * f[j];
  return r;
}

Vector TransitionMatrix::apply_left(const Vector& mu) const {
  if (mu.size() != size()) throw ContractError("measure length differs from the state count");
  Vector r(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (mu[i] == 0) continue;
    for (const auto& [j, p] : rows_[i]) r[j] += mu[i] * p;
  }
  return r;
}

DenseMatrix TransitionMatrix::dense() const {
  DenseMatrix m(size(), size());
  for (std::size_t i = 0; i < size(); ++i)
    for (const auto& [j, p] : rows_[i]) m(i, j) = p;
  return m;
}

TransitionMatrix TransitionMatrix::from_dense(std::vector<BasisElement> states, const DenseMatrix& m) {
  std::vector<Row> rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) rows[i][j] = m(i, j);
  return TransitionMatrix(std::move(states), std::move(rows));
}

ChainError::ChainError(const std::string& what, BasisElement state, Element offending)
    : std::runtime_error(what), state_(std::move(state)), offending_(std::move(offending)) {}

// ---------------------------------------------------------------- construction

ChainSpec make_chain(const HopfAlgebra& h, const PieceDistribution& p, const StateConfig& config, std::size_t cap) {
  return ChainSpec{&h, p, enumerate_states(h, config, cap)};
}

namespace {

std::string describe(const HopfAlgebra& h, const BasisElement& x) { return h.to_text(x); }

bool single_big_part(const WeakComposition& d) {
  int big = 0;
  for (unsigned p : d.parts) big += p > 1;
  return big <= 1;
}

// Runs body(i) for i in [0, n), spread across hardware threads when it pays off.
void parallel_rows(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (hw == 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < hw; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

ValidationReport validate_state_space_basis(const ChainSpec& spec) {
  const HopfAlgebra& h = *spec.algebra;
  const unsigned n = spec.P.n();
  ValidationReport rep;
  auto fail = [&](const BasisElement& x, std::string why) {
    rep.valid = false;
    rep.state = x;
    rep.witness = describe(h, x) + ": " + why;
    return rep;
  };
  bool reduced = true;
  bool two_sided = false;
  for (const auto& [d, w] : spec.P.weights()) {
    WeakComposition nz = d.normalized();
    reduced = reduced && single_big_part(nz);
    if (nz.parts.size() >= 2 && nz.parts.front() > 1) two_sided = true;
    if (nz.parts.size() >= 2 && nz.parts.front() == 1 && nz.parts.back() == 1 && n > 2) two_sided = true;
  }
  auto check_products = [&](const BasisElement& x, const Tensor& t) -> bool {
    for (const auto& [y, c] : h.product(t))
      if (c < 0) {
        fail(x, "negative product structure constant " + fraction_string(c) + " at " + describe(h, y));
        return false;
      }
    return true;
  };
  for (const auto& x : spec.states) {
    if (x.degree != n) return fail(x, "degree " + std::to_string(x.degree) + " differs from " + std::to_string(n));
    if (n >= 1) {
      if (reduced) {
        auto left = h.coproduct(x, 1);
        bool nonzero = false;
        for (const auto& term : left) {
          if (term.coefficient < 0) return fail(x, "negative coproduct structure constant in Delta_{1,n-1}");
          nonzero = true;
          if (!check_products(x, {term.left, term.right}) || !check_products(x, {term.right, term.left})) return rep;
        }
        if (!nonzero) return fail(x, "Delta_{1,n-1}(x) = 0");
        if (two_sided)
          for (const auto& term : h.coproduct(x, n - 1)) {
            if (term.coefficient < 0) return fail(x, "negative coproduct structure constant in Delta_{n-1,1}");
            if (!check_products(x, {term.left, term.right}) || !check_products(x, {term.right, term.left})) return rep;
          }
      } else {
        for (const auto& [d, w] : spec.P.weights()) {
          for (const auto& [t, c] : h.refined_coproduct(x, d.normalized())) {
            if (c < 0) return fail(x, "negative coproduct structure constant for D=" + d.to_string());
            if (!check_products(x, t)) return rep;
          }
        }
      }
    }
    const Rational e = h.eta(x);
    if (e <= 0) return fail(x, "eta(x) = " + fraction_string(e) + " is not positive");
  }
  return rep;
}

TransitionMatrix build_transition_matrix(const HopfAlgebra& h, const CompositionSum& op,
                                         const std::vector<BasisElement>& states) {
  std::map<BasisElement, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);
  std::vector<TransitionMatrix::Row> rows(states.size());
  parallel_rows(states.size(), [&](std::size_t i) {
    const BasisElement& x = states[i];
    const Rational ex = h.eta(x);
    if (ex <= 0) throw ChainError("eta vanishes at " + h.to_text(x), x);
    const Element image = descent_operator(h, x, op);
    for (const auto& [y, c] : image) {
      auto it = index.find(y);
      if (it == index.end())
        throw ChainError("mass escapes the state list from " + h.to_text(x) + " to " + h.to_text(y) +
                             " (image: " + element_to_text(h, image) + ")",
                         x, image);
      Rational p = c * h.eta(y) / ex;
      if (p < 0) throw ChainError("negative transition weight from " + h.to_text(x) + " to " + h.to_text(y), x, image);
      rows[i][it->second] = p;
    }
  });
  return TransitionMatrix(states, std::move(rows));
}

TransitionMatrix build_transition_matrix(const ChainSpec& spec) {
  return build_transition_matrix(*spec.algebra, spec.P.operator_sum(), spec.states);
}

BasisElement step_sample(const ChainSpec& spec, const BasisElement& x, CounterRng& rng) {
  const HopfAlgebra& h = *spec.algebra;
  std::vector<WeakComposition> ds;
  std::vector<Rational> dw;
  for (const auto& [d, w] : spec.P.weights()) {
    ds.push_back(d);
    dw.push_back(w);
  }
  const WeakComposition d = ds[sample_index(dw, rng)].normalized();

  std::vector<Tensor> tuples;
  std::vector<Rational> tw;
  for (const auto& [t, c] : h.refined_coproduct(x, d)) {
    Rational w = c;
    for (const auto& z : t) w *= h.eta(z);
    tuples.push_back(t);
    tw.push_back(w);
  }
  const Tensor& pieces = tuples[sample_index(tw, rng)];

  std::vector<BasisElement> ys;
  std::vector<Rational> yw;
  for (const auto& [y, c] : h.product(pieces)) {
    ys.push_back(y);
    yw.push_back(c * h.eta(y));
  }
  return ys[sample_index(yw, rng)];
}

Vector distribution_vector_at_time(const TransitionMatrix& k, std::size_t start, unsigned t) {
  Vector mu(k.size());
  mu.at(start) = 1;
  for (unsigned s = 0; s < t; ++s) mu = k.apply_left(mu);
  return mu;
}

std::map<BasisElement, Rational> distribution_at_time(const TransitionMatrix& k, const BasisElement& x0, unsigned t) {
  const Vector mu = distribution_vector_at_time(k, k.require_index(x0), t);
  std::map<BasisElement, Rational> out;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] != 0) out.emplace(k.states()[i], mu[i]);
  return out;
}

LumpResult lump(const TransitionMatrix& k, const StateMap& theta) {
  std::vector<BasisElement> image(k.size());
  std::set<BasisElement> classes;
  for (std::size_t i = 0; i < k.size(); ++i) {
    image[i] = theta(k.states()[i]);
    classes.insert(image[i]);
  }
  std::vector<BasisElement> qstates(classes.begin(), classes.end());
  std::map<BasisElement, std::size_t> qindex;
  for (std::size_t i = 0; i < qstates.size(); ++i) qindex.emplace(qstates[i], i);

  std::vector<TransitionMatrix::Row> qrows(qstates.size());
  std::vector<std::optional<std::size_t>> representative(qstates.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    TransitionMatrix::Row mass;
    for (const auto& [j, p] : k.row(i)) mass[qindex.at(image[j])] += p;
    const std::size_t ci = qindex.at(image[i]);
    if (!representative[ci]) {
      representative[ci] = i;
      qrows[ci] = mass;
      continue;
    }
    if (mass != qrows[ci]) {
      // Name the first target class where the two rows disagree.
      for (std::size_t c = 0; c < qstates.size(); ++c) {
        auto a = qrows[ci].count(c) ? qrows[ci].at(c) : Rational(0);
        auto b = mass.count(c) ? mass.at(c) : Rational(0);
        if (a != b) return LumpViolation{k.states()[*representative[ci]], k.states()[i], qstates[c], a, b};
      }
    }
  }
  return TransitionMatrix(std::move(qstates), std::move(qrows));
}

std::vector<std::size_t> absorbing_states(const TransitionMatrix& k) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k.entry(i, i) == 1) out.push_back(i);
  return out;
}

Rational absorption_probability(const TransitionMatrix& k, const BasisElement& x0, unsigned t) {
  const Vector mu = distribution_vector_at_time(k, k.require_index(x0), t);
  Rational s(0);
  for (std::size_t i : absorbing_states(k)) s += mu[i];
  return s;
}

bool is_degree_one_monomial(const HopfAlgebra& h, const BasisElement& y) {
  if (y.degree == 0) return true;
  const TensorSum pieces = h.refined_coproduct(y, WeakComposition(std::vector<unsigned>(y.degree, 1)));
  if (pieces.empty()) return false;
  for (const auto& [t, c] : pieces)
    if (h.product(t) != Element(y)) return false;
  return true;
}

Rational absorption_via_qsym(const ChainSpec& spec, const BasisElement& x0, unsigned t) {
  const HopfAlgebra& h = *spec.algebra;
  if (!h.free_commutative()) throw ContractError("absorption via the internal product needs a free commutative algebra");
  const unsigned n = spec.P.n();
  if (x0.degree != n) throw ContractError("start state degree differs from the operator degree");
  const CompositionSum sp = spec.P.operator_sum();
  CompositionSum power(WeakComposition{n}.normalized(), Rational(1));
  for (unsigned s = 0; s < t; ++s) power = internal_product(power, sp, Orientation::commutative);
  Rational pairing(0);
  for (const auto& [d, c] : power) {
    Rational zeta(0);
    for (const auto& [y, coeff] : descent_operator_D(h, x0, d))
      if (is_degree_one_monomial(h, y)) zeta += coeff;
    pairing += c * zeta;
  }
  return Rational(factorial(n)) * pairing / h.eta(x0);
}

BalanceReport detailed_balance_check(const TransitionMatrix& k, const Vector& pi) {
  if (pi.size() != k.size()) throw ContractError("distribution length differs from the state count");
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = i + 1; j < k.size(); ++j)
      if (pi[i] * k.entry(i, j) != pi[j] * k.entry(j, i)) return {false, std::make_pair(i, j)};
  return {true, std::nullopt};
}

}  // namespace dchain
