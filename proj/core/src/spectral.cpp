#include "dchain/spectral.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace dchain {

namespace {

Integer binom_big(const Integer& top, unsigned long k) {
  Integer r;
  mpz_bin_ui(r.get_mpz_t(), top.get_mpz_t(), k);
  return r;
}

std::map<unsigned, unsigned> part_counts(const IntPartition& lambda) {
  std::map<unsigned, unsigned> m;
  for (unsigned p : lambda) ++m[p];
  return m;
}

unsigned partition_total(const IntPartition& lambda) { return std::accumulate(lambda.begin(), lambda.end(), 0u); }

// Adds (value, multiplicity) to a report keyed by exact value.
struct Aggregator {
  std::map<Rational, SpectrumLine, std::greater<>> lines;

  SpectrumLine& at(const Rational& v) {
    auto [it, inserted] = lines.try_emplace(v);
    if (inserted) {
      it->second.value = v;
      it->second.multiplicity = 0;
    }
    return it->second;
  }

  std::vector<SpectrumLine> finish() {
    std::vector<SpectrumLine> out;
    for (auto& [v, line] : lines)
      if (line.multiplicity != 0) out.push_back(std::move(line));
    return out;
  }
};

}  // namespace

Integer beta_lambda_D(const IntPartition& lambda, const WeakComposition& d) {
  if (partition_total(lambda) != d.total()) throw ContractError("partition and composition have different totals");
  std::vector<unsigned> room = d.parts;
  std::function<Integer(std::size_t)> count = [&](std::size_t idx) -> Integer {
    if (idx == lambda.size()) {
      for (unsigned r : room)
        if (r != 0) return 0;
      return 1;
    }
    Integer s = 0;
    for (auto& r : room)
      if (r >= lambda[idx]) {
        r -= lambda[idx];
        s += count(idx + 1);
        r += lambda[idx];
      }
    return s;
  };
  return count(0);
}

Rational beta_lambda_P(const IntPartition& lambda, const PieceDistribution& p) {
  if (partition_total(lambda) != p.n()) throw ContractError("partition total differs from the distribution degree");
  Rational s(0);
  for (const auto& [d, w] : p.weights()) s += w * Rational(beta_lambda_D(lambda, d)) / Rational(multinomial(d));
  return s;
}

std::vector<Integer> generator_counts(const std::vector<Integer>& dims) {
  if (dims.empty() || dims[0] != 1) throw ContractError("dimension series must start with 1");
  const std::size_t top = dims.size() - 1;
  std::vector<Integer> series(top + 1, 0), b(top + 1, 0);
  series[0] = 1;
  for (std::size_t m = 1; m <= top; ++m) {
    b[m] = dims[m] - series[m];
    if (b[m] < 0) throw ContractError("inconsistent dimension series: b_" + std::to_string(m) + " is negative");
    if (b[m] == 0) continue;
    std::vector<Integer> next(top + 1, 0);
    for (std::size_t d = 0; d <= top; ++d)
      for (std::size_t k = 0; k * m <= d; ++k) next[d] += binom_big(b[m] + k - 1, k) * series[d - k * m];
    series = std::move(next);
  }
  return b;
}

Integer multiplicity(const IntPartition& lambda, const std::vector<Integer>& b) {
  Integer r = 1;
  for (const auto& [part, m] : part_counts(lambda)) {
    if (part >= b.size()) throw ContractError("generator counts do not reach degree " + std::to_string(part));
    r *= binom_big(b[part] + m - 1, m);
  }
  return r;
}

Integer SpectrumReport::total() const {
  Integer s = 0;
  for (const auto& l : eigenvalues) s += l.multiplicity;
  return s;
}

Integer SpectrumReport::multiplicity_of(const Rational& value) const {
  for (const auto& l : eigenvalues)
    if (l.value == value) return l.multiplicity;
  return 0;
}

nlohmann::json spectrum_to_json(const SpectrumReport& r) {
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : r.eigenvalues) {
    nlohmann::json e{{"value", fraction_string(l.value)}, {"multiplicity", l.multiplicity.get_str()}};
    e["partitions"] = l.partitions;
    if (!l.js.empty()) e["j"] = l.js;
    lines.push_back(std::move(e));
  }
  nlohmann::json b = nlohmann::json::array();
  for (std::size_t i = 1; i < r.b.size(); ++i) b.push_back(r.b[i].get_str());
  return {{"eigenvalues", lines}, {"b", b}};
}

SpectrumReport spectrum_from_json(const nlohmann::json& j) {
  SpectrumReport r;
  for (const auto& e : j.at("eigenvalues")) {
    SpectrumLine l;
    l.value = parse_rational(e.at("value").get<std::string>());
    l.multiplicity = Integer(e.at("multiplicity").get<std::string>());
    l.partitions = e.at("partitions").get<std::vector<IntPartition>>();
    if (e.contains("j")) l.js = e.at("j").get<std::vector<unsigned>>();
    r.eigenvalues.push_back(std::move(l));
  }
  if (j.contains("b") && !j.at("b").empty()) {
    r.b.push_back(0);
    for (const auto& v : j.at("b")) r.b.emplace_back(v.get<std::string>());
  }
  return r;
}

SpectrumReport descent_spectrum(const PieceDistribution& p, const std::vector<Integer>& dims) {
  const unsigned n = p.n();
  if (dims.size() <= n) throw ContractError("dimension series is shorter than the degree");
  SpectrumReport r;
  r.b = generator_counts(dims);
  Aggregator agg;
  for (const auto& lambda : partitions_of(n)) {
    Integer m = multiplicity(lambda, r.b);
    if (m == 0) continue;
    auto& line = agg.at(beta_lambda_P(lambda, p));
    line.multiplicity += m;
    line.partitions.push_back(lambda);
  }
  r.eigenvalues = agg.finish();
  return r;
}

SpectrumReport distinct_deck_spectrum(const PieceDistribution& p) {
  const unsigned n = p.n();
  SpectrumReport r;
  Aggregator agg;
  for (const auto& lambda : partitions_of(n)) {
    Integer denom = 1;
    for (const auto& [part, m] : part_counts(lambda)) {
      Integer pw;
      mpz_ui_pow_ui(pw.get_mpz_t(), part, m);
      denom *= pw * factorial(m);
    }
    auto& line = agg.at(beta_lambda_P(lambda, p));
    line.multiplicity += factorial(n) / denom;
    line.partitions.push_back(lambda);
  }
  r.eigenvalues = agg.finish();
  return r;
}

SpectrumReport t2r_spectrum(const OperatorSpec& op, unsigned n, const std::vector<Integer>& dims, const Integer& dim1) {
  if (!op.top_to_random_family()) throw ContractError("operator is not in the top/bottom-to-random family");
  if (dims.size() <= n) throw ContractError("dimension series is shorter than the degree");
  if (n >= 1 && dims[1] != dim1) throw ContractError("dim H_1 disagrees with the dimension series");
  SpectrumReport r;
  try {
    r.b = generator_counts(std::vector<Integer>(dims.begin(), dims.begin() + n + 1));
  } catch (const ContractError&) {
    r.b.clear();
  }
  Aggregator agg;
  for (unsigned j = 0; j <= n; ++j) {
    Integer x_part = 0;
    for (unsigned k = 0; k <= n - j; ++k) {
      Integer term = binom_big(dim1, k) * dims[n - j - k];
      x_part += (k % 2 == 0) ? term : Integer(-term);
    }
    const Integer m = x_part * binom_big(dim1 + j - 1, j);
    if (m < 0) throw ContractError("inconsistent dimension series: negative multiplicity at j=" + std::to_string(j));
    if (m == 0) continue;
    auto& line = agg.at(op.family_eigenvalue(n, j));
    line.multiplicity += m;
    line.js.push_back(j);
  }
  r.eigenvalues = agg.finish();
  return r;
}

SpectrumCheck check_spectrum(const DenseMatrix& m, const SpectrumReport& r) {
  Polynomial p = characteristic_polynomial(m);
  for (const auto& l : r.eigenvalues) {
    const unsigned got = root_multiplicity(p, l.value);
    if (Integer(got) != l.multiplicity)
      return {false, "eigenvalue " + fraction_string(l.value) + " has algebraic multiplicity " + std::to_string(got) +
                         ", expected " + l.multiplicity.get_str()};
    for (unsigned i = 0; i < got; ++i) p = deflate(p, l.value);
  }
  if (p.size() != 1)
    return {false, "characteristic polynomial has " + std::to_string(p.size() - 1) + " roots outside the report"};
  return {};
}

std::size_t geometric_multiplicity(const DenseMatrix& m, const Rational& value) {
  return m.rows() - rank(m - DenseMatrix::identity(m.rows()).scaled(value));
}

std::vector<Element> coproduct_kernel(const HopfAlgebra& h, const std::vector<BasisElement>& basis, bool two_sided) {
  if (basis.empty()) return {};
  const unsigned m = basis.front().degree;
  if (m == 0) return {Element(basis.front())};
  std::map<std::pair<int, Tensor>, std::size_t> row_of;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(basis.size());
  auto collect = [&](int tag, unsigned left) {
    for (std::size_t c = 0; c < basis.size(); ++c)
      for (const auto& t : h.coproduct(basis[c], left)) {
        auto key = std::make_pair(tag, Tensor{t.left, t.right});
        auto it = row_of.try_emplace(key, row_of.size()).first;
        columns[c].emplace_back(it->second, t.coefficient);
      }
  };
  collect(0, 1);
  if (two_sided) collect(1, m - 1);
  DenseMatrix a(row_of.size(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (const auto& [r, v] : columns[c]) a(r, c) += v;
  std::vector<Element> out;
  for (const auto& v : kernel(a)) {
    Element e;
    for (std::size_t c = 0; c < basis.size(); ++c) e.add(basis[c], v[c]);
    out.push_back(std::move(e));
  }
  return out;
}

KernelConditionError::KernelConditionError(const std::string& what, WeakComposition split)
    : ContractError(what), split_(std::move(split)) {}

Rational t2r_eigenvector_value(const OperatorSpec& op, unsigned n, unsigned j) { return op.family_eigenvalue(n, j); }

Element t2r_eigenvector(const HopfAlgebra& h, const OperatorSpec& op, unsigned n, unsigned j, const Element& p,
                        const std::vector<BasisElement>& cs) {
  if (!op.top_to_random_family()) throw ContractError("operator is not in the top/bottom-to-random family");
  if (j > n) throw ContractError("j exceeds the degree");
  if (cs.size() != j) throw ContractError("need exactly j degree-one elements");
  for (const auto& c : cs)
    if (c.degree != 1 || c.algebra != h.id()) throw ContractError("the c_i must be degree-one basis elements");
  const unsigned m = n - j;
  for (const auto& [x, c] : p)
    if (x.degree != m) throw ContractError("p is not homogeneous of degree n - j");
  if (p.empty()) throw ContractError("p is zero");

  auto check_split = [&](unsigned left) {
    TensorSum image;
    for (const auto& [x, c] : p)
      for (const auto& t : h.coproduct(x, left)) image.add(Tensor{t.left, t.right}, c * t.coefficient);
    if (!image.empty()) {
      WeakComposition split{left, m - left};
      throw KernelConditionError("p is not in the kernel of Delta_" + split.to_string(), split);
    }
  };
  if (m >= 1) {
    check_split(1);
    if (op.two_sided()) check_split(m - 1);
  }

  // weight[i]: coefficient of the terms with i of the c's to the left of p.
  std::vector<Rational> weight(j + 1, Rational(0));
  switch (op.kind) {
    case OperatorKind::ter:
    case OperatorKind::trer:
    case OperatorKind::binter: weight[j] = 1; break;
    case OperatorKind::tober:
    case OperatorKind::bintobrer:
      for (unsigned i = 0; i <= j; ++i)
        weight[i] = Rational(binomial(j, i)) * rational_pow(op.q, i) * rational_pow(1 - op.q, j - i);
      break;
    case OperatorKind::trintober:
      for (unsigned i = 0; i <= j; ++i)
        weight[i] = Rational(binomial(j, i)) * rational_pow(op.q1, i) * rational_pow(op.q3, j - i);
      break;
    case OperatorKind::taber:
    case OperatorKind::tabrer: {
      const unsigned r = op.kind == OperatorKind::taber ? 1 : op.r;
      if (j < 2 * r) {
        weight[j] = 1;
      } else {
        for (unsigned i = r; i <= j - r; ++i) weight[i] = Rational(binomial(j - r, i) * binomial(j - r, i - r));
      }
      break;
    }
    default: throw ContractError("operator is not in the top/bottom-to-random family");
  }

  Element out;
  std::vector<std::size_t> order(j);
  std::iota(order.begin(), order.end(), 0);
  do {
    for (unsigned i = 0; i <= j; ++i) {
      if (weight[i] == 0) continue;
      Tensor left, right;
      for (unsigned k = 0; k < i; ++k) left.push_back(cs[order[k]]);
      for (unsigned k = i; k < j; ++k) right.push_back(cs[order[k]]);
      Element term = h.product(h.product(h.product(left), p), h.product(right));
      out.add_scaled(term, weight[i]);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

Rational EigenFunction::at(const BasisElement& x) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == x) return values[i];
  throw ContractError("state is not in the eigenfunction's domain");
}

std::optional<std::string> eigen_residual(const TransitionMatrix& k, const EigenFunction& f) {
  if (f.values.size() != k.size() || f.states != k.states()) return "eigenfunction domain differs from the state list";
  const Vector image = f.side == Side::right ? k.apply(f.values) : k.apply_left(f.values);
  for (std::size_t i = 0; i < image.size(); ++i) {
    const Rational expected = f.eigenvalue * f.values[i];
    if (image[i] != expected)
      return "residual " + fraction_string(image[i] - expected) + " at state index " + std::to_string(i);
  }
  return std::nullopt;
}

EigenFunction make_eigenfunction(const TransitionMatrix& k, Side side, const Rational& eigenvalue, Vector values,
                                 std::string name) {
  EigenFunction f{side, eigenvalue, k.states(), std::move(values), std::move(name)};
  if (auto why = eigen_residual(k, f))
    throw EigenEquationError((f.name.empty() ? std::string("eigenfunction") : f.name) + " fails its eigen-equation (" +
                             fraction_string(eigenvalue) + "): " + *why);
  return f;
}

EigenFunction extract_eigenfunction(const TransitionMatrix& k, const HopfAlgebra& h, const Element& v, Side side,
                                    const Rational& eigenvalue, std::string name) {
  Vector values(k.size());
  if (side == Side::left) {
    for (const auto& [x, c] : v) {
      auto i = k.index_of(x);
      if (!i) throw ContractError("eigenvector has support outside the state list: " + h.to_text(x));
      values[*i] = h.eta(x) * c;
    }
  } else {
    std::map<std::pair<unsigned, std::string>, Rational> dual;
    for (const auto& [x, c] : v) dual.emplace(std::make_pair(x.degree, x.payload), c);
    for (std::size_t i = 0; i < k.size(); ++i) {
      const auto& x = k.states()[i];
      auto it = dual.find({x.degree, x.payload});
      if (it != dual.end()) values[i] = it->second / h.eta(x);
    }
  }
  return make_eigenfunction(k, side, eigenvalue, std::move(values), std::move(name));
}

std::vector<BasisElement> degree_one_elements(const HopfAlgebra& h, const std::vector<BasisElement>& states) {
  std::set<BasisElement> out;
  for (const auto& x : states) {
    if (x.degree == 0) continue;
    for (const auto& [t, c] : h.refined_coproduct(x, WeakComposition(std::vector<unsigned>(x.degree, 1))))
      out.insert(t.begin(), t.end());
  }
  return {out.begin(), out.end()};
}

std::vector<EigenFunction> stationary_distributions(const ChainSpec& spec, const TransitionMatrix& k) {
  const HopfAlgebra& h = *spec.algebra;
  const unsigned n = spec.P.n();
  bool split = false;
  for (const auto& [d, w] : spec.P.weights()) split = split || d.normalized().length() >= 2;
  if (!split) throw ContractError("stationary distributions need P to charge a composition with two nonzero parts");

  const std::vector<BasisElement> ones = degree_one_elements(h, spec.states);
  std::vector<EigenFunction> out;
  if (ones.empty()) return out;
  const Rational scale = Rational(1) / Rational(factorial(n) * factorial(n));

  std::vector<std::size_t> pick(n, 0);
  while (true) {
    // Distinct orderings of the multiset, each weighted by prod m_c!.
    Integer repeat = 1;
    for (std::size_t a = 0, b; a < pick.size(); a = b) {
      for (b = a; b < pick.size() && pick[b] == pick[a]; ++b) {}
      repeat *= factorial(b - a);
    }
    std::vector<std::size_t> order = pick;
    Element sum;
    bool fits = true;
    do {
      Tensor t;
      for (auto idx : order) t.push_back(ones[idx]);
      Element prod = h.product(t);
      for (const auto& [y, c] : prod)
        if (!k.index_of(y)) fits = false;
      if (!fits) break;
      sum.add_scaled(prod, Rational(repeat));
    } while (std::next_permutation(order.begin(), order.end()));

    if (fits && !sum.empty()) {
      Vector pi(k.size());
      for (const auto& [y, c] : sum) pi[*k.index_of(y)] = scale * h.eta(y) * c;
      std::string label;
      for (auto idx : pick) label += (label.empty() ? "" : ",") + h.to_text(ones[idx]);
      out.push_back(make_eigenfunction(k, Side::left, Rational(1), std::move(pi), "stationary{" + label + "}"));
    }

    // Next multiset (nondecreasing index sequence).
    std::size_t pos = n;
    while (pos > 0 && pick[pos - 1] == ones.size() - 1) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    for (std::size_t q = pos; q < n; ++q) pick[q] = pick[pos - 1];
  }
  return out;
}

SymmetrisationBlock symmetrisation_block(const PieceDistribution& p, const std::vector<unsigned>& degrees) {
  const std::size_t k = degrees.size();
  if (std::accumulate(degrees.begin(), degrees.end(), 0u) != p.n())
    throw ContractError("primitive degrees do not sum to the distribution degree");
  for (unsigned d : degrees)
    if (d == 0) throw ContractError("primitive degrees must be positive");

  SymmetrisationBlock blk;
  std::vector<unsigned> base(k);
  std::iota(base.begin(), base.end(), 0u);
  do blk.orderings.push_back(base);
  while (std::next_permutation(base.begin(), base.end()));
  std::map<std::vector<unsigned>, std::size_t> index;
  for (std::size_t i = 0; i < blk.orderings.size(); ++i) index.emplace(blk.orderings[i], i);

  const std::size_t N = blk.orderings.size();
  blk.matrix = DenseMatrix(N, N);
  for (const auto& [d, w] : p.weights()) {
    const WeakComposition nd = d.normalized();
    const Rational coeff = w / Rational(multinomial(nd));
    for (std::size_t src = 0; src < N; ++src) {
      const auto& word = blk.orderings[src];
      std::vector<unsigned> room = nd.parts;
      std::vector<std::size_t> block_of(k);
      std::function<void(std::size_t)> assign = [&](std::size_t pos) {
        if (pos == k) {
          for (unsigned r : room)
            if (r != 0) return;
          std::vector<unsigned> target;
          for (std::size_t b = 0; b < room.size(); ++b)
            for (std::size_t q = 0; q < k; ++q)
              if (block_of[q] == b) target.push_back(word[q]);
          blk.matrix(index.at(target), src) += coeff;
          return;
        }
        const unsigned deg = degrees[word[pos]];
        for (std::size_t b = 0; b < room.size(); ++b)
          if (room[b] >= deg) {
            room[b] -= deg;
            block_of[pos] = b;
            assign(pos + 1);
            room[b] += deg;
          }
      };
      assign(0);
    }
  }

  std::vector<Rational> sums(N, Rational(0));
  for (std::size_t c = 0; c < N; ++c)
    for (std::size_t r = 0; r < N; ++r) sums[c] += blk.matrix(r, c);
  blk.beta = sums[0];
  blk.column_sums_equal = std::all_of(sums.begin(), sums.end(), [&](const Rational& s) { return s == blk.beta; });

  // A closed communicating class of the column-stochastic walk carries the nonnegative solution.
  std::vector<std::vector<bool>> reach(N, std::vector<bool>(N, false));
  for (std::size_t s = 0; s < N; ++s) {
    std::vector<std::size_t> stack{s};
    reach[s][s] = true;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < N; ++v)
        if (blk.matrix(v, u) != 0 && !reach[s][v]) {
          reach[s][v] = true;
          stack.push_back(v);
        }
    }
  }
  std::optional<std::size_t> root;
  for (std::size_t v = 0; v < N && !root; ++v) {
    bool closed = true;
    for (std::size_t u = 0; u < N && closed; ++u)
      if (reach[v][u] && !reach[u][v]) closed = false;
    if (closed) root = v;
  }
  std::vector<std::size_t> cls;
  for (std::size_t u = 0; u < N; ++u)
    if (reach[*root][u]) cls.push_back(u);
  DenseMatrix sub(cls.size(), cls.size());
  for (std::size_t a = 0; a < cls.size(); ++a)
    for (std::size_t b = 0; b < cls.size(); ++b)
      sub(a, b) = blk.matrix(cls[a], cls[b]) - (a == b ? blk.beta : Rational(0));
  const auto ker = kernel(sub);
  if (ker.empty()) throw std::runtime_error("symmetrisation block has an empty nonnegative kernel");
  Vector v = ker.front();
  Rational sign = 1;
  for (const auto& x : v)
    if (x != 0) {
      sign = x > 0 ? 1 : -1;
      break;
    }
  blk.kappa.assign(N, Rational(0));
  for (std::size_t a = 0; a < cls.size(); ++a) blk.kappa[cls[a]] = sign * v[a];
  const Vector image = blk.matrix.apply(blk.kappa);
  for (std::size_t i = 0; i < N; ++i)
    if (blk.kappa[i] < 0 || image[i] != blk.beta * blk.kappa[i])
      throw std::runtime_error("symmetrisation block has an empty nonnegative kernel");
  return blk;
}

Rational predict_expectation(const EigenFunction& f, const BasisElement& x0, unsigned t) {
  if (f.side != Side::right) throw ContractError("expectations need a right eigenfunction");
  return rational_pow(f.eigenvalue, t) * f.at(x0);
}

}  // namespace dchain
