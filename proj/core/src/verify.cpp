#include "dchain/verify.hpp"

#include "dchain/algebras.hpp"
#include "dchain/catalog.hpp"
#include "dchain/chain.hpp"
#include "dchain/linalg.hpp"
#include "dchain/spectral.hpp"

#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

namespace dchain {

bool SuiteResult::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const CheckRow* SuiteResult::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"hopf-axioms", "eta-harmonic", "spectrum-exact", "eigenbasis",
                                              "lumping",     "absorption",   "paper-goldens"};
  return names;
}

namespace {

using Failure = std::optional<std::string>;

class Runner {
 public:
  explicit Runner(std::string suite) { result_.suite = std::move(suite); }

  void check(std::string name, const std::function<Failure()>& body) {
    CheckRow row{std::move(name), false, {}};
    try {
      Failure f = body();
      row.passed = !f;
      if (f) row.detail = *f;
    } catch (const std::exception& e) {
      row.detail = std::string("exception: ") + e.what();
    }
    result_.checks.push_back(std::move(row));
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

std::string text(const Rational& q) { return fraction_string(q); }

std::string state_text(const BasisElement& b) { return algebra_for(b.algebra).to_text(b); }

Permutation identity_permutation(unsigned n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 1u);
  return p;
}

Word distinct_deck(unsigned n) {
  Word w(n);
  std::iota(w.begin(), w.end(), 1u);
  return w;
}

OperatorSpec op_of(OperatorKind kind) {
  OperatorSpec op;
  op.kind = kind;
  return op;
}

OperatorSpec binter_op(const Rational& q2) {
  OperatorSpec op = op_of(OperatorKind::binter);
  op.q2 = q2;
  return op;
}

TreeChainConfig tree_config(const BasisElement& start, TreeModel model, const Rational& q2 = Rational(1, 2)) {
  TreeChainConfig c;
  c.start = start;
  c.model = model;
  c.q2 = q2;
  return c;
}

Failure compare_matrices(const TransitionMatrix& got, const TransitionMatrix& want) {
  if (got.states() != want.states()) return "state lists differ";
  for (std::size_t i = 0; i < got.size(); ++i)
    for (std::size_t j = 0; j < got.size(); ++j)
      if (got.entry(i, j) != want.entry(i, j))
        return "entry (" + state_text(got.states()[i]) + ", " + state_text(got.states()[j]) + "): " +
               text(got.entry(i, j)) + " vs " + text(want.entry(i, j));
  return std::nullopt;
}

// ---------------------------------------------------------------- hopf-axioms

TensorSum bracket_left(const HopfAlgebra& h, const BasisElement& x, unsigned a, unsigned b) {
  TensorSum out;
  for (const auto& outer : h.coproduct(x, a + b))
    for (const auto& inner : h.coproduct(outer.left, a))
      out.add({inner.left, inner.right, outer.right}, outer.coefficient * inner.coefficient);
  return out;
}

TensorSum bracket_right(const HopfAlgebra& h, const BasisElement& x, unsigned a, unsigned b) {
  TensorSum out;
  for (const auto& outer : h.coproduct(x, a))
    for (const auto& inner : h.coproduct(outer.right, b))
      out.add({outer.left, inner.left, inner.right}, outer.coefficient * inner.coefficient);
  return out;
}

Failure coassociativity(const HopfAlgebra& h, const std::vector<BasisElement>& xs) {
  for (const auto& x : xs) {
    const unsigned n = x.degree;
    for (unsigned a = 1; a < n; ++a)
      for (unsigned b = 1; a + b < n; ++b) {
        const TensorSum l = bracket_left(h, x, a, b), r = bracket_right(h, x, a, b);
        const TensorSum refined = h.refined_coproduct(x, WeakComposition{a, b, n - a - b});
        if (l != r || l != refined)
          return "coassociativity fails at " + h.to_text(x) + " with (" + std::to_string(a) + "," +
                 std::to_string(b) + "," + std::to_string(n - a - b) + ")";
      }
  }
  return std::nullopt;
}

Failure compatibility(const HopfAlgebra& h, const std::vector<BasisElement>& xs) {
  for (const auto& x : xs)
    for (const auto& y : xs) {
      const unsigned p = x.degree, q = y.degree;
      for (unsigned i = 0; i <= p + q; ++i) {
        TensorSum lhs, rhs;
        for (const auto& [z, cz] : h.product(x, y))
          for (const auto& t : h.coproduct(z, i)) lhs.add({t.left, t.right}, cz * t.coefficient);
        for (unsigned a = (i > q ? i - q : 0); a <= std::min(i, p); ++a)
          for (const auto& tx : h.coproduct(x, a))
            for (const auto& ty : h.coproduct(y, i - a)) {
              const Element left = h.product(tx.left, ty.left), right = h.product(tx.right, ty.right);
              for (const auto& [l, cl] : left)
                for (const auto& [r, cr] : right) rhs.add({l, r}, tx.coefficient * ty.coefficient * cl * cr);
            }
        if (lhs != rhs)
          return "compatibility fails at " + h.to_text(x) + " * " + h.to_text(y) + ", split " + std::to_string(i);
      }
    }
  return std::nullopt;
}

Failure eta_recursion(const HopfAlgebra& h, const std::vector<BasisElement>& xs) {
  for (const auto& x : xs) {
    const Rational e = h.eta(x);
    if (e <= 0) return "eta(" + h.to_text(x) + ") = " + text(e) + " is not positive";
    if (x.degree < 2) continue;
    Rational sum(0);
    for (const auto& t : h.coproduct(x, 1)) sum += t.coefficient * h.eta(t.left) * h.eta(t.right);
    if (sum != e) return "eta recursion fails at " + h.to_text(x);
  }
  return std::nullopt;
}

struct Sample {
  std::string name;
  const HopfAlgebra* h;
  std::vector<BasisElement> small;  // degree <= 2, for products
  std::vector<BasisElement> large;  // degree 3-4, for coassociativity
};

std::vector<BasisElement> concat_states(const HopfAlgebra& h, const std::vector<StateConfig>& configs) {
  std::vector<BasisElement> out;
  for (const auto& c : configs) {
    auto s = enumerate_states(h, c);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::vector<BasisElement> as_dual(const std::vector<BasisElement>& perms) {
  std::vector<BasisElement> out;
  for (const auto& p : perms) out.push_back(make_permutation(AlgebraId::fqsym_dual, permutation_of(p)));
  return out;
}

std::vector<Sample> axiom_samples() {
  std::vector<Sample> out;
  out.push_back({"shuffle", &shuffle_algebra(), concat_states(shuffle_algebra(), {AllWords{2, 1}, AllWords{2, 2}}),
                 concat_states(shuffle_algebra(), {AllWords{2, 3}, DeckStates{{1, 1, 2, 3}}})});
  out.push_back({"free-associative", &free_associative_algebra(),
                 concat_states(free_associative_algebra(), {AllWords{2, 1}, AllWords{2, 2}}),
                 concat_states(free_associative_algebra(), {AllWords{2, 3}, DeckStates{{1, 1, 2, 3}}})});
  const auto perms12 = concat_states(fqsym_algebra(), {AllPermutations{1}, AllPermutations{2}});
  const auto perms34 = concat_states(fqsym_algebra(), {AllPermutations{3}, AllPermutations{4}});
  out.push_back({"fqsym", &fqsym_algebra(), perms12, perms34});
  out.push_back({"fqsym-dual", &fqsym_dual_algebra(), as_dual(perms12), as_dual(perms34)});
  std::vector<BasisElement> forests_small, forests_large;
  for (unsigned n = 1; n <= 2; ++n)
    for (const auto& f : unlabelled_forests(n)) forests_small.push_back(f);
  forests_small.push_back(make_forest({vertex(std::nullopt, {vertex("A")})}));
  for (unsigned n = 3; n <= 4; ++n)
    for (const auto& f : unlabelled_forests(n)) forests_large.push_back(f);
  for (const auto& t : rooted_subtrees(four_person_company()))
    if (t.degree >= 3) forests_large.push_back(t);
  out.push_back({"connes-kreimer", &connes_kreimer_algebra(), forests_small, forests_large});
  out.push_back({"sym-e", &sym_e_algebra(), concat_states(sym_e_algebra(), {AllPartitions{1}, AllPartitions{2}}),
                 concat_states(sym_e_algebra(), {AllPartitions{3}, AllPartitions{4}})});
  return out;
}

SuiteResult hopf_axioms() {
  Runner run("hopf-axioms");
  for (const auto& s : axiom_samples()) {
    run.check(s.name + ": coassociativity", [&] { return coassociativity(*s.h, s.large); });
    run.check(s.name + ": product/coproduct compatibility", [&] { return compatibility(*s.h, s.small); });
    run.check(s.name + ": eta positive, eta = sum over first-letter splits", [&] {
      auto all = s.small;
      all.insert(all.end(), s.large.begin(), s.large.end());
      return eta_recursion(*s.h, all);
    });
  }
  run.check("forest coproduct-ratio identity, degree <= 6", [] {
    std::size_t cases = 0;
    for (unsigned n = 1; n <= 6; ++n)
      for (const auto& x : unlabelled_forests(n))
        for (unsigned m = 1; m <= n; ++m)
          for (const auto& t : unlabelled_trees(m))
            for (unsigned i = 0; i + m <= n; ++i) {
              const auto [lhs, rhs] = hook_ratio_sides(x, t, i);
              ++cases;
              if (lhs != rhs)
                return Failure("x = " + state_text(x) + ", T' = " + state_text(t) + ", i = " + std::to_string(i) +
                               ": " + text(lhs) + " vs " + text(rhs));
            }
    return cases > 0 ? Failure() : Failure("no cases");
  });
  run.check("trunk hook sum equals binom(n, i), degree <= 6", [] {
    for (unsigned n = 1; n <= 6; ++n)
      for (const auto& x : unlabelled_forests(n))
        for (unsigned i = 0; i <= n; ++i)
          if (trunk_hook_sum(x, i) != Rational(binomial(n, i)))
            return Failure("x = " + state_text(x) + ", i = " + std::to_string(i));
    return Failure();
  });
  return run.take();
}

// ---------------------------------------------------------------- eta-harmonic

struct NamedChain {
  std::string name;
  ChainSpec spec;
};

std::vector<NamedChain> harmonic_chains() {
  std::vector<NamedChain> out;
  const auto& ck = connes_kreimer_algebra();
  for (auto model : {TreeModel::single, TreeModel::binomial, TreeModel::vp}) {
    TreeChainConfig cfg = tree_config(four_person_company(), model, model == TreeModel::vp ? Rational(1, 2) : Rational(1, 3));
    const PieceDistribution p = cfg.distribution();
    out.push_back({"tree " + std::string(tree_model_name(model)), make_chain(ck, p, ClosureStates{cfg.start, p})});
  }
  {
    const PieceDistribution p = top_to_random(8);
    out.push_back({"tree single, eight people", make_chain(ck, p, ClosureStates{eight_person_company(), p})});
  }
  out.push_back({"to-do ter_4", todo_chain(op_of(OperatorKind::ter), 4)});
  out.push_back({"to-do binter_4(1/2)", todo_chain(binter_op(Rational(1, 2)), 4)});
  out.push_back({"shuffle riffle, deck 1123", shuffle_chain(riffle_distribution(4), {1, 1, 2, 3})});
  out.push_back({"shuffle tober(1/3), deck 123", shuffle_chain(top_or_bottom_to_random(3, Rational(1, 3)), {1, 2, 3})});
  out.push_back({"free-associative taber_4", make_chain(free_associative_algebra(), top_and_bottom_to_random(4),
                                                      DeckStates{{1, 2, 3, 4}})});
  out.push_back({"rock ter_5", rock_chain(top_to_random(5), 5)});
  out.push_back({"rock riffle_5", rock_chain(riffle_distribution(5), 5)});
  out.push_back({"fqsym-dual ter_3", make_chain(fqsym_dual_algebra(), top_to_random(3), AllPermutations{3})});
  for (auto& c : out)
    if (c.name == "fqsym-dual ter_3") {
      std::vector<BasisElement> dual;
      for (const auto& s : c.spec.states) dual.push_back(make_permutation(AlgebraId::fqsym_dual, permutation_of(s)));
      c.spec.states = dual;
    }
  return out;
}

SuiteResult eta_harmonic() {
  Runner run("eta-harmonic");
  std::vector<NamedChain> chains;
  run.check("build the sample chains", [&] {
    chains = harmonic_chains();
    return Failure();
  });
  for (const auto& c : chains) {
    run.check(c.name + ": state space basis conditions", [&] {
      const auto report = validate_state_space_basis(c.spec);
      return report.valid ? Failure() : Failure(report.witness);
    });
    run.check(c.name + ": eta is harmonic for the descent operator", [&]() -> Failure {
      const HopfAlgebra& h = *c.spec.algebra;
      for (const auto& x : c.spec.states) {
        Rational sum(0);
        for (const auto& [y, coeff] : descent_operator_P(h, x, c.spec.P)) sum += coeff * h.eta(y);
        if (sum != h.eta(x)) return "at " + h.to_text(x) + ": " + text(sum) + " vs eta " + text(h.eta(x));
      }
      return std::nullopt;
    });
    run.check(c.name + ": rows are probability vectors", [&]() -> Failure {
      const TransitionMatrix k = build_transition_matrix(c.spec);
      for (std::size_t i = 0; i < k.size(); ++i) {
        Rational sum(0);
        for (const auto& [j, p] : k.row(i)) {
          if (p < 0) return "negative entry in row " + state_text(k.states()[i]);
          sum += p;
        }
        if (sum != 1) return "row " + state_text(k.states()[i]) + " sums to " + text(sum);
      }
      return std::nullopt;
    });
  }
  return run.take();
}

// ---------------------------------------------------------------- spectrum-exact

Failure spectrum_matches(const TransitionMatrix& k, const SpectrumReport& r) {
  if (r.total() != Integer(static_cast<unsigned long>(k.size())))
    return "multiplicities sum to " + r.total().get_str() + ", states " + std::to_string(k.size());
  const SpectrumCheck c = check_spectrum(k.dense(), r);
  return c.ok ? Failure() : Failure(c.witness);
}

std::vector<Integer> dims_for(const HopfAlgebra& h, const StateConfig& config, unsigned n) {
  auto d = dimension_series(h, config, n);
  if (!d) throw ContractError("dimension series unavailable");
  return *d;
}

SuiteResult spectrum_exact() {
  Runner run("spectrum-exact");
  for (unsigned n : {3u, 4u})
    for (const auto& [label, p] : std::vector<std::pair<std::string, PieceDistribution>>{
             {"riffle", riffle_distribution(n)}, {"ter", top_to_random(n)}, {"tober(1/3)", top_or_bottom_to_random(n, Rational(1, 3))}})
      run.check("shuffle, " + std::to_string(n) + " distinct cards, " + label, [&, n] {
        const TransitionMatrix k = build_transition_matrix(shuffle_chain(p, distinct_deck(n)));
        return spectrum_matches(k, distinct_deck_spectrum(p));
      });
  for (unsigned n : {3u, 4u})
    for (const auto& [label, p] : std::vector<std::pair<std::string, PieceDistribution>>{
             {"riffle", riffle_distribution(n)}, {"ter", top_to_random(n)}, {"taber", top_and_bottom_to_random(n)}}) {
      run.check("sym-e n=" + std::to_string(n) + ", " + label, [&, n] {
        const TransitionMatrix k = build_transition_matrix(rock_chain(p, n));
        return spectrum_matches(k, descent_spectrum(p, dims_for(sym_e_algebra(), AllPartitions{n}, n)));
      });
      run.check("free-associative, words of length " + std::to_string(n) + " in 2 letters, " + label, [&, n] {
        const AllWords words{2, n};
        const TransitionMatrix k =
            build_transition_matrix(make_chain(free_associative_algebra(), p, words));
        return spectrum_matches(k, descent_spectrum(p, dims_for(free_associative_algebra(), words, n)));
      });
    }
  run.check("riffle on 3 distinct cards: {1:1, 1/2:3, 1/4:2}, diagonalisable", []() -> Failure {
    const PieceDistribution p = riffle_distribution(3);
    const TransitionMatrix k = build_transition_matrix(shuffle_chain(p, distinct_deck(3)));
    const SpectrumReport r = distinct_deck_spectrum(p);
    const std::map<Rational, long> want{{Rational(1), 1}, {Rational(1, 2), 3}, {Rational(1, 4), 2}};
    if (r.eigenvalues.size() != want.size()) return "wrong number of distinct eigenvalues";
    for (const auto& line : r.eigenvalues) {
      auto it = want.find(line.value);
      if (it == want.end() || line.multiplicity != it->second) return "unexpected line " + text(line.value);
      if (geometric_multiplicity(k.dense(), line.value) != std::size_t(it->second))
        return "eigenspace of " + text(line.value) + " is too small";
    }
    return spectrum_matches(k, r);
  });
  run.check("to-do ter_4 spectrum from the top-to-random formula", [] {
    const OperatorSpec op = op_of(OperatorKind::ter);
    const TransitionMatrix k = build_transition_matrix(todo_chain(op, 4));
    std::vector<Integer> dims{1, 1, 2, 6, 24};
    return spectrum_matches(k, t2r_spectrum(op, 4, dims, 1));
  });
  run.check("to-do binter_4(1/3) spectrum from the top-to-random formula", [] {
    const OperatorSpec op = binter_op(Rational(1, 3));
    const TransitionMatrix k = build_transition_matrix(todo_chain(op, 4));
    std::vector<Integer> dims{1, 1, 2, 6, 24};
    return spectrum_matches(k, t2r_spectrum(op, 4, dims, 1));
  });
  run.check("to-do ter_5 multiplicities {1:1, 3/5:1, 2/5:4, 1/5:18, 0:96}", []() -> Failure {
    std::vector<Integer> dims{1, 1, 2, 6, 24, 120};
    const SpectrumReport r = t2r_spectrum(op_of(OperatorKind::ter), 5, dims, 1);
    const std::map<Rational, long> want{{Rational(1), 1}, {Rational(3, 5), 1}, {Rational(2, 5), 4},
                                        {Rational(1, 5), 18}, {Rational(0), 96}};
    for (const auto& [v, m] : want)
      if (r.multiplicity_of(v) != m) return "multiplicity of " + text(v) + " is " + r.multiplicity_of(v).get_str();
    return r.total() == 120 ? Failure() : Failure("total is not 120");
  });
  run.check("tree chain spectrum: one eigenvalue per rooted subtree", []() -> Failure {
    for (auto model : {TreeModel::single, TreeModel::binomial}) {
      const TreeChainConfig cfg = tree_config(eight_person_company(), model, Rational(1, 3));
      const TransitionMatrix k = tree_chain_matrix(cfg);
      const Polynomial chi = characteristic_polynomial(k.dense());
      std::map<Rational, unsigned> want;
      for (const auto& t : k.states())
        ++want[t.degree == 1 ? Rational(1)
                             : (model == TreeModel::single ? Rational(cfg.n0() - t.degree) / cfg.n0()
                                                           : rational_pow(cfg.q2, t.degree))];
      for (const auto& [v, m] : want)
        if (root_multiplicity(chi, v) != m) return "eigenvalue " + text(v) + " has the wrong multiplicity";
    }
    return std::nullopt;
  });
  return run.take();
}

// ---------------------------------------------------------------- eigenbasis

Element commutator(const HopfAlgebra& h, const Element& a, const Element& b) {
  return h.product(a, b) - h.product(b, a);
}

SuiteResult eigenbasis() {
  Runner run("eigenbasis");
  for (const auto& [label, start] :
       std::vector<std::pair<std::string, BasisElement>>{{"four people", four_person_company()},
                                                         {"eight people", eight_person_company()}})
    for (auto model : {TreeModel::single, TreeModel::binomial})
      run.check("tree " + std::string(tree_model_name(model)) + ", " + label +
                    ": f_T' eigenfunctions form a basis",
                [&, model]() -> Failure {
                  const TreeChainConfig cfg = tree_config(start, model, Rational(1, 3));
                  const TransitionMatrix k = tree_chain_matrix(cfg);
                  DenseMatrix basis(k.size(), k.size());
                  for (std::size_t i = 0; i < k.size(); ++i) basis(i, 0) = 1;
                  std::size_t col = 1;
                  for (const auto& t : k.states()) {
                    if (t.degree < 2) continue;
                    const EigenFunction f = tree_eigenfunction(t, cfg, k);
                    for (std::size_t i = 0; i < k.size(); ++i) basis(i, col) = f.values[i];
                    ++col;
                  }
                  return rank(basis) == k.size() ? Failure() : Failure("eigenfunctions are dependent");
                });
  run.check("team-count observables are eigenfunctions", []() -> Failure {
    for (const auto& start : {four_person_company(), eight_person_company()})
      for (auto model : {TreeModel::single, TreeModel::binomial})
        for (const std::vector<unsigned>& s : {std::vector<unsigned>{}, {1}, {0, 1}, {1, 2}, {1, 1}}) {
          const TreeChainConfig cfg = tree_config(start, model, Rational(1, 3));
          const FlatForest f = flat_of(start);
          if (s.size() > f.children[0].size()) continue;
          const TransitionMatrix k = tree_chain_matrix(cfg);
          const Observable obs = team_count_observable(s, cfg);
          if (!obs.eigenvalue) continue;
          Vector v;
          for (const auto& t : k.states()) v.push_back(obs.evaluate(t));
          make_eigenfunction(k, Side::right, *obs.eigenvalue, v, obs.name);
        }
    return std::nullopt;
  });
  run.check("team-count expectation equals beta^t f(x0), t <= 5", []() -> Failure {
    for (auto model : {TreeModel::single, TreeModel::binomial}) {
      const TreeChainConfig cfg = tree_config(four_person_company(), model, Rational(1, 3));
      const TransitionMatrix k = tree_chain_matrix(cfg);
      const Observable obs = team_count_observable({1}, cfg);
      for (unsigned t = 0; t <= 5; ++t) {
        Rational mean(0);
        for (const auto& [x, p] : distribution_at_time(k, cfg.start, t)) mean += p * obs.evaluate(x);
        if (mean != rational_pow(*obs.eigenvalue, t) * obs.evaluate(cfg.start))
          return "t = " + std::to_string(t) + ", model " + std::string(tree_model_name(model));
      }
    }
    return std::nullopt;
  });
  for (const auto& op : {op_of(OperatorKind::ter), binter_op(Rational(1, 2))})
    run.check("to-do " + op.name() + ", n = 4: relative-order eigenbasis", [op]() -> Failure {
      const TransitionMatrix k = build_transition_matrix(todo_chain(op, 4));
      const auto fs = fqsym_eigenbasis(k, op, 4);
      DenseMatrix m(k.size(), fs.size());
      for (std::size_t c = 0; c < fs.size(); ++c)
        for (std::size_t i = 0; i < k.size(); ++i) m(i, c) = fs[c].values[i];
      return rank(m) == k.size() ? Failure() : Failure("rank " + std::to_string(rank(m)));
    });
  run.check("free-associative taber_5: eigenvectors from primitives, j = 0..3", []() -> Failure {
    const auto& h = free_associative_algebra();
    const OperatorSpec op = op_of(OperatorKind::taber);
    const ChainSpec spec = make_chain(h, op.distribution(5), DeckStates{distinct_deck(5)});
    const TransitionMatrix k = build_transition_matrix(spec);
    for (unsigned j = 0; j <= 3; ++j) {
      const unsigned m = 5 - j;
      Element p(make_word(AlgebraId::free_associative, {1}));
      for (unsigned letter = 2; letter <= m; ++letter)
        p = commutator(h, p, Element(make_word(AlgebraId::free_associative, {letter})));
      std::vector<BasisElement> cs;
      for (unsigned letter = m + 1; letter <= 5; ++letter) cs.push_back(make_word(AlgebraId::free_associative, {letter}));
      const Element v = t2r_eigenvector(h, op, 5, j, p, cs);
      if (v.empty()) return "zero eigenvector at j = " + std::to_string(j);
      const Rational beta = op.family_eigenvalue(5, j);
      if (j < 2 && beta != 0) return "expected eigenvalue 0 for j < 2";
      extract_eigenfunction(k, h, v, Side::left, beta, "j=" + std::to_string(j));
    }
    return std::nullopt;
  });
  run.check("stationary distributions are probability left 1-eigenfunctions", []() -> Failure {
    const std::vector<NamedChain> chains{
        {"shuffle riffle 1123", shuffle_chain(riffle_distribution(4), {1, 1, 2, 3})},
        {"to-do ter_4", todo_chain(op_of(OperatorKind::ter), 4)},
        {"rock riffle_4", rock_chain(riffle_distribution(4), 4)}};
    for (const auto& c : chains) {
      const TransitionMatrix k = build_transition_matrix(c.spec);
      const auto pis = stationary_distributions(c.spec, k);
      if (pis.empty()) return c.name + ": none found";
      for (const auto& pi : pis) {
        Rational total(0);
        for (const auto& v : pi.values) {
          if (v < 0) return c.name + ": negative mass";
          total += v;
        }
        if (total != 1) return c.name + ": mass " + text(total);
      }
    }
    return std::nullopt;
  });
  run.check("symmetrisation block: equal column sums, nonnegative kernel vector", []() -> Failure {
    const std::vector<std::pair<PieceDistribution, std::vector<unsigned>>> cases{
        {riffle_distribution(4), {1, 1, 2}},
        {top_to_random(5), {1, 2, 2}},
        {top_or_bottom_to_random(4, Rational(1, 3)), {2, 1, 1}},
        {trinomial_top_or_bottom(4, Rational(1, 4), Rational(1, 2), Rational(1, 4)), {1, 3}}};
    for (const auto& [p, degrees] : cases) {
      const SymmetrisationBlock b = symmetrisation_block(p, degrees);
      if (!b.column_sums_equal) return "column sums differ";
      IntPartition lambda(degrees.begin(), degrees.end());
      std::sort(lambda.rbegin(), lambda.rend());
      if (b.beta != beta_lambda_P(lambda, p)) return "column sum is not beta_lambda";
      bool nonzero = false;
      for (const auto& v : b.kappa) {
        if (v < 0) return "kappa has a negative entry";
        nonzero = nonzero || v != 0;
      }
      if (!nonzero) return "kappa is zero";
      const Vector image = b.matrix.apply(b.kappa);
      for (std::size_t i = 0; i < image.size(); ++i)
        if (image[i] != b.beta * b.kappa[i]) return "kappa is not in the beta-eigenspace";
    }
    return std::nullopt;
  });
  run.check("vp model: E[fo_j(X_t)] within its bound, t <= 4", []() -> Failure {
    TreeChainConfig cfg = tree_config(four_person_company(), TreeModel::vp);
    cfg.q1 = Rational(1, 4);
    cfg.q2 = Rational(1, 2);
    cfg.q3 = Rational(1, 4);
    const TransitionMatrix k = tree_chain_matrix(cfg);
    for (unsigned j = 0; j + 2 <= cfg.n0(); ++j)
      for (unsigned t = 0; t <= 4; ++t) {
        const BoundCheck b = vp_bound(cfg, k, j, t);
        if (!b.holds()) return "j = " + std::to_string(j) + ", t = " + std::to_string(t) + ": " + text(b.value) +
                               " > " + text(b.bound);
      }
    return std::nullopt;
  });
  return run.take();
}

// ---------------------------------------------------------------- lumping

Failure lumps_to(const TransitionMatrix& k, const StateMap& theta, const TransitionMatrix& want) {
  const LumpResult r = lump(k, theta);
  if (const auto* v = std::get_if<LumpViolation>(&r))
    return "not lumpable: " + state_text(v->first) + " and " + state_text(v->second) + " send " +
           text(v->first_mass) + " vs " + text(v->second_mass) + " to " + state_text(v->target_class);
  return compare_matrices(std::get<TransitionMatrix>(r), want);
}

SuiteResult lumping() {
  Runner run("lumping");
  run.check("to-do ter_5 observed on the last 3 items is (2/5) I + (3/5) ter_3", [] {
    const OperatorSpec op = op_of(OperatorKind::ter);
    const TransitionMatrix k5 = build_transition_matrix(todo_chain(op, 5));
    const TransitionMatrix k3 = build_transition_matrix(todo_chain(op, 3));
    const DenseMatrix lazy = DenseMatrix::identity(k3.size()).scaled(Rational(2, 5)) + k3.dense().scaled(Rational(3, 5));
    return lumps_to(k5, last_letters_map(3), TransitionMatrix::from_dense(k3.states(), lazy));
  });
  run.check("to-do binter_5(1/3) observed on the last 3 items is binter_3(1/3)", [] {
    const OperatorSpec op = binter_op(Rational(1, 3));
    return lumps_to(build_transition_matrix(todo_chain(op, 5)), last_letters_map(3),
                    build_transition_matrix(todo_chain(op, 3)));
  });
  run.check("to-do lumpings for every k < n = 4", []() -> Failure {
    for (const auto& op : {op_of(OperatorKind::ter), binter_op(Rational(2, 3))}) {
      const TransitionMatrix k4 = build_transition_matrix(todo_chain(op, 4));
      for (unsigned k = 1; k < 4; ++k) {
        const TransitionMatrix kk = build_transition_matrix(todo_chain(op, k));
        TransitionMatrix want = kk;
        if (op.kind == OperatorKind::ter)
          want = TransitionMatrix::from_dense(kk.states(), DenseMatrix::identity(kk.size()).scaled(Rational(4 - k, 4)) +
                                                               kk.dense().scaled(Rational(k, 4)));
        if (auto f = lumps_to(k4, last_letters_map(k), want)) return op.name() + ", k = " + std::to_string(k) + ": " + *f;
      }
    }
    return std::nullopt;
  });
  run.check("the first-letter map is not a lumping of to-do ter_4", []() -> Failure {
    const TransitionMatrix k = build_transition_matrix(todo_chain(op_of(OperatorKind::ter), 4));
    // Observe the letter in position 1 as a one-letter word.
    const StateMap top = [](const BasisElement& x) { return make_word(AlgebraId::shuffle, {permutation_of(x).front()}); };
    const LumpResult r = lump(k, top);
    return std::holds_alternative<LumpViolation>(r) ? Failure() : Failure("unexpectedly lumpable");
  });
  run.check("tree chain observed through the team count is consistent", []() -> Failure {
    // Department sizes (A-part, C-part) under the single model form a lumping of the four-person chain.
    const TreeChainConfig cfg = tree_config(four_person_company(), TreeModel::single);
    const TransitionMatrix k = tree_chain_matrix(cfg);
    const StateMap sizes = [](const BasisElement& t) {
      const FlatForest f = flat_of(t);
      const auto h = f.hook_lengths();
      unsigned a = 0, c = 0;
      for (int child : f.children[0]) (f.label[child] == std::optional<std::string>("A") ? a : c) = h[child];
      return make_word(AlgebraId::shuffle, {a + 1, c + 1});
    };
    const LumpResult r = lump(k, sizes);
    return std::holds_alternative<TransitionMatrix>(r) ? Failure() : Failure("department sizes do not lump");
  });
  return run.take();
}

// ---------------------------------------------------------------- absorption

SuiteResult absorption() {
  Runner run("absorption");
  for (auto model : {TreeModel::single, TreeModel::binomial})
    for (const auto& [label, start] : std::vector<std::pair<std::string, BasisElement>>{
             {"four people", four_person_company()}, {"eight people", eight_person_company()}})
      run.check("tree " + std::string(tree_model_name(model)) + ", " + label +
                    ": internal-product absorption equals matrix power, t = 1..3",
                [&, model]() -> Failure {
                  const TreeChainConfig cfg = tree_config(start, model, Rational(1, 2));
                  const PieceDistribution p = cfg.distribution();
                  const ChainSpec spec = make_chain(connes_kreimer_algebra(), p, ClosureStates{start, p});
                  const TransitionMatrix padded = build_transition_matrix(spec);
                  const TransitionMatrix trees = tree_chain_matrix(cfg);
                  const auto absorbing = absorbing_states(trees);
                  if (absorbing.size() != 1 || trees.states()[absorbing[0]] != single_vertex_forest())
                    return "the lone boss should be the unique absorbing state";
                  for (unsigned t = 1; t <= 3; ++t) {
                    const Rational via = absorption_via_qsym(spec, start, t);
                    const Rational power = absorption_probability(padded, start, t);
                    const Rational tree_power = absorption_probability(trees, start, t);
                    if (via != power || power != tree_power)
                      return "t = " + std::to_string(t) + ": " + text(via) + ", " + text(power) + ", " + text(tree_power);
                  }
                  return std::nullopt;
                });
  for (const auto& [label, p] : std::vector<std::pair<std::string, PieceDistribution>>{
           {"ter_4", top_to_random(4)}, {"riffle_4", riffle_distribution(4)}, {"taber_4", top_and_bottom_to_random(4)}})
    run.check("rock " + label + ": internal-product absorption equals matrix power, t = 1..4", [&]() -> Failure {
      const ChainSpec spec = rock_chain(p, 4);
      const TransitionMatrix k = build_transition_matrix(spec);
      const BasisElement start = make_partition({4});
      for (unsigned t = 1; t <= 4; ++t)
        if (absorption_via_qsym(spec, start, t) != absorption_probability(k, start, t))
          return "t = " + std::to_string(t);
      return std::nullopt;
    });
  run.check("rock survival bound, lambda = (4), n' = 3, t <= 10", []() -> Failure {
    for (unsigned t = 0; t <= 10; ++t) {
      const BoundCheck b = rock_survival_bound({4}, 3, t);
      if (!b.holds()) return "t = " + std::to_string(t) + ": " + text(b.value) + " > " + text(b.bound);
    }
    return std::nullopt;
  });
  run.check("rock survival bound, lambda = (3, 2), n' = 2, t <= 6", []() -> Failure {
    for (unsigned t = 0; t <= 6; ++t) {
      const BoundCheck b = rock_survival_bound({3, 2}, 2, t);
      if (!b.holds()) return "t = " + std::to_string(t) + ": " + text(b.value) + " > " + text(b.bound);
    }
    return std::nullopt;
  });
  return run.take();
}

// ---------------------------------------------------------------- paper-goldens

// Tree-chain matrices for the four-person company, state order
// (boss, boss-A, boss-C, boss-C-D, boss-(A, C), boss-(A, C-D)).
DenseMatrix four_person_single() {
  DenseMatrix m(6, 6);
  m(0, 0) = 1;
  m(1, 0) = Rational(1, 2), m(1, 1) = Rational(1, 2);
  m(2, 0) = Rational(1, 2), m(2, 2) = Rational(1, 2);
  m(3, 2) = Rational(3, 4), m(3, 3) = Rational(1, 4);
  m(4, 1) = Rational(3, 8), m(4, 2) = Rational(3, 8), m(4, 4) = Rational(1, 4);
  m(5, 3) = Rational(1, 3), m(5, 4) = Rational(2, 3);
  return m;
}

// First column uses (1-q)^(n-1) (1 + (n-1) q) for a tree on n vertices, which makes rows sum to 1.
DenseMatrix four_person_binomial(const Rational& q) {
  auto pw = [&](const Rational& x, unsigned k) { return rational_pow(x, k); };
  const Rational p = 1 - q;
  DenseMatrix m(6, 6);
  m(0, 0) = 1;
  m(1, 0) = p * (1 + q), m(1, 1) = pw(q, 2);
  m(2, 0) = p * (1 + q), m(2, 2) = pw(q, 2);
  m(3, 0) = pw(p, 2) * (1 + 2 * q), m(3, 2) = 3 * pw(q, 2) * p, m(3, 3) = pw(q, 3);
  m(4, 0) = pw(p, 2) * (1 + 2 * q), m(4, 1) = Rational(3, 2) * pw(q, 2) * p, m(4, 2) = Rational(3, 2) * pw(q, 2) * p,
       m(4, 4) = pw(q, 3);
  m(5, 0) = pw(p, 3) * (1 + 3 * q), m(5, 1) = 2 * pw(q, 2) * pw(p, 2), m(5, 2) = 4 * pw(q, 2) * pw(p, 2),
       m(5, 3) = Rational(4, 3) * pw(q, 3) * p, m(5, 4) = Rational(8, 3) * pw(q, 3) * p, m(5, 5) = pw(q, 4);
  return m;
}

std::vector<BasisElement> pinned_tree_states() {
  return {make_forest({vertex()}),
          make_forest({vertex(std::nullopt, {vertex("A")})}),
          make_forest({vertex(std::nullopt, {vertex("C")})}),
          make_forest({vertex(std::nullopt, {vertex("C", {vertex("D")})})}),
          make_forest({vertex(std::nullopt, {vertex("A"), vertex("C")})}),
          four_person_company()};
}

Failure dense_equal(const TransitionMatrix& k, const DenseMatrix& want) {
  if (k.states() != pinned_tree_states()) return "state order differs from the pinned order";
  const DenseMatrix got = k.dense();
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (got(i, j) != want(i, j))
        return "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + text(got(i, j)) + " vs " +
               text(want(i, j));
  return std::nullopt;
}

SuiteResult paper_goldens() {
  Runner run("paper-goldens");
  run.check("four-person company, single model matrix", [] {
    return dense_equal(tree_chain_matrix(tree_config(four_person_company(), TreeModel::single)), four_person_single());
  });
  run.check("four-person company, binomial model at q = 1/3, 7/10, 1", []() -> Failure {
    for (const Rational q : {Rational(1, 3), Rational(7, 10), Rational(1)})
      if (auto f = dense_equal(tree_chain_matrix(tree_config(four_person_company(), TreeModel::binomial, q)),
                               four_person_binomial(q)))
        return "q = " + text(q) + ": " + *f;
    return std::nullopt;
  });
  run.check("four-person company eigenfunction table and eigenvalues", []() -> Failure {
    const std::vector<Vector> columns{{0, 1, 0, 0, Rational(3, 2), 2},
                                      {0, 0, 1, 3, Rational(3, 2), 4},
                                      {0, 0, 0, 1, 0, Rational(4, 3)},
                                      {0, 0, 0, 0, 1, Rational(8, 3)},
                                      {0, 0, 0, 0, 0, 1}};
    const Rational q(2, 5);
    const std::vector<Rational> single{Rational(1, 2), Rational(1, 2), Rational(1, 4), Rational(1, 4), 0};
    const std::vector<Rational> binom{q * q, q * q, q * q * q, q * q * q, q * q * q * q};
    for (auto model : {TreeModel::single, TreeModel::binomial}) {
      const TreeChainConfig cfg = tree_config(four_person_company(), model, q);
      const TransitionMatrix k = tree_chain_matrix(cfg);
      for (std::size_t c = 0; c < 5; ++c) {
        const EigenFunction f = tree_eigenfunction(k.states()[c + 1], cfg, k);
        if (f.values != columns[c]) return "column " + std::to_string(c + 2) + " differs";
        if (f.eigenvalue != (model == TreeModel::single ? single : binom)[c])
          return "eigenvalue of column " + std::to_string(c + 2);
      }
    }
    return std::nullopt;
  });
  run.check("hook walk on boss-(A, C-D): A 1/3, D 2/3", []() -> Failure {
    const FlatForest f = flat_of(four_person_company());
    const auto law = hook_walk_distribution(f);
    for (std::size_t v = 0; v < f.size(); ++v) {
      Rational want(0);
      if (f.label[v] == std::optional<std::string>("A")) want = Rational(1, 3);
      if (f.label[v] == std::optional<std::string>("D")) want = Rational(2, 3);
      if (law[v] != want) return "vertex " + f.label[v].value_or("boss") + " gets " + text(law[v]);
    }
    return std::nullopt;
  });
  run.check("hook walk from C in the eight-person company: D, E 1/4, G 1/2", []() -> Failure {
    const FlatForest f = flat_of(eight_person_company());
    int c = -1;
    for (std::size_t v = 0; v < f.size(); ++v)
      if (f.label[v] == std::optional<std::string>("C")) c = static_cast<int>(v);
    const auto law = hook_walk_distribution(f, c);
    const std::map<std::string, Rational> want{{"D", Rational(1, 4)}, {"E", Rational(1, 4)}, {"G", Rational(1, 2)}};
    for (std::size_t v = 0; v < f.size(); ++v) {
      const std::string name = f.label[v].value_or("boss");
      const auto it = want.find(name);
      if (law[v] != (it == want.end() ? Rational(0) : it->second)) return name + " gets " + text(law[v]);
    }
    return std::nullopt;
  });
  run.check("hook walk law equals the eta ratios on every eight-person subtree", []() -> Failure {
    for (const auto& t : rooted_subtrees(eight_person_company())) {
      if (t.degree < 2) continue;
      const FlatForest f = flat_of(t);
      const auto law = hook_walk_distribution(f);
      std::map<BasisElement, Rational> by_tree;
      for (std::size_t v = 0; v < f.size(); ++v)
        if (law[v] != 0) {
          std::vector<bool> keep(f.size(), true);
          keep[v] = false;
          by_tree[induced_forest(f, keep)] += law[v];
        }
      if (by_tree != removal_distribution(t, 1)) return "at " + state_text(t);
    }
    return std::nullopt;
  });
  run.check("team count on the eight-person company, s = (1, 2), is 160", []() -> Failure {
    const Rational v = team_count_observable({1, 2}, tree_config(eight_person_company(), TreeModel::single))
                           .evaluate(eight_person_company());
    return v == 160 ? Failure() : Failure("got " + text(v));
  });
  run.check("relative-order eigenfunction for tau = 12534: 35412, 24153, 25431 give 1, -1, 0", []() -> Failure {
    const std::vector<BasisElement> states{make_permutation(AlgebraId::fqsym, {3, 5, 4, 1, 2}),
                                           make_permutation(AlgebraId::fqsym, {2, 4, 1, 5, 3}),
                                           make_permutation(AlgebraId::fqsym, {2, 5, 4, 3, 1})};
    const Vector v = todo_eigenfunction_values({1, 2, 5, 3, 4}, states);
    return v == Vector{1, -1, 0} ? Failure() : Failure("values differ");
  });
  run.check("to-do trer_5 (r = 2) moves 23541 to 15423", []() -> Failure {
    OperatorSpec op = op_of(OperatorKind::trer);
    op.r = 2;
    const TransitionMatrix k = build_transition_matrix(todo_chain(op, 5));
    const Rational p = k.entry(k.require_index(make_permutation(AlgebraId::fqsym, {2, 3, 5, 4, 1})),
                               k.require_index(make_permutation(AlgebraId::fqsym, {1, 5, 4, 2, 3})));
    return p == Rational(1, 20) ? Failure() : Failure("probability " + text(p));
  });
  run.check("to-do mechanics equal the Hopf construction", []() -> Failure {
    OperatorSpec trer = op_of(OperatorKind::trer);
    trer.r = 2;
    for (const auto& op : {op_of(OperatorKind::ter), trer, binter_op(Rational(1, 3))})
      for (unsigned n = 1; n <= 4; ++n) {
        if (op.kind == OperatorKind::trer && n < 2) continue;
        if (auto f = compare_matrices(todo_matrix_direct(op, n), build_transition_matrix(todo_chain(op, n))))
          return op.name() + ", n = " + std::to_string(n) + ": " + *f;
      }
    return std::nullopt;
  });
  run.check("to-do ter_4 stationary distribution is uniform 1/24", []() -> Failure {
    const ChainSpec spec = todo_chain(op_of(OperatorKind::ter), 4);
    const auto pis = stationary_distributions(spec, build_transition_matrix(spec));
    if (pis.size() != 1) return "expected one stationary distribution";
    for (const auto& v : pis[0].values)
      if (v != Rational(1, 24)) return "mass " + text(v);
    return std::nullopt;
  });
  run.check("newest-position law: closed form equals matrix power", []() -> Failure {
    for (const auto& op : {op_of(OperatorKind::ter), binter_op(Rational(1, 2))})
      for (const auto& [n, j, t] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{{5, 2, 1}, {5, 2, 3}, {4, 1, 2}, {4, 1, 0}}) {
        const PositionLaw law = newest_position_distribution(n, j, t, op);
        if (!law.agree())
          return op.name() + " (" + std::to_string(n) + "," + std::to_string(j) + "," + std::to_string(t) + ")";
      }
    const PositionLaw ex = newest_position_distribution(5, 2, 1, op_of(OperatorKind::ter));
    const std::map<unsigned, Rational> want{{3, Rational(3, 5)}, {4, Rational(1, 5)}, {5, Rational(1, 5)}};
    return ex.exact == want ? Failure() : Failure("n=5, j=2, t=1 example differs");
  });
  run.check("to-do and shuffle chains from the identity agree, n = 4, t <= 3", []() -> Failure {
    for (const auto& op : {op_of(OperatorKind::ter), binter_op(Rational(1, 3))}) {
      const TransitionMatrix todo = build_transition_matrix(todo_chain(op, 4));
      const TransitionMatrix deck = build_transition_matrix(shuffle_chain(op.distribution(4), distinct_deck(4)));
      for (unsigned t = 1; t <= 3; ++t) {
        std::map<Permutation, Rational> a, b;
        for (const auto& [x, p] : distribution_at_time(todo, make_permutation(AlgebraId::fqsym, identity_permutation(4)), t))
          a[permutation_of(x)] = p;
        for (const auto& [x, p] : distribution_at_time(deck, make_word(AlgebraId::shuffle, distinct_deck(4)), t))
          b[word_of(x)] = p;
        if (a != b) return op.name() + ", t = " + std::to_string(t);
      }
    }
    return std::nullopt;
  });
  run.check("riffle on 3 distinct cards has eigenvalues 2^l(lambda) / 8", []() -> Failure {
    const SpectrumReport r = distinct_deck_spectrum(riffle_distribution(3));
    for (const auto& line : r.eigenvalues)
      for (const auto& lambda : line.partitions)
        if (line.value != Rational(1u << lambda.size()) / 8) return "value " + text(line.value);
    return std::nullopt;
  });
  run.check("sym-e n = 5: bintobrer_2(1/3) is a falling factorial in tober(1/3)", []() -> Failure {
    const Rational q(1, 3);
    const auto k = [&](const PieceDistribution& p) { return build_transition_matrix(rock_chain(p, 5)).dense(); };
    const DenseMatrix tob = k(top_or_bottom_to_random(5, q));
    const DenseMatrix id = DenseMatrix::identity(tob.rows());
    const DenseMatrix poly = tob * (tob.scaled(5) - id).scaled(Rational(1, 4));
    return k(binomial_top_or_bottom_r(5, q, 2)) == poly ? Failure() : Failure("matrices differ");
  });
  run.check("sym-e n = 5: trintober(1/4, 1/2, 1/4) is the binomial mixture of bintobrer", []() -> Failure {
    const auto k = [&](const PieceDistribution& p) { return build_transition_matrix(rock_chain(p, 5)).dense(); };
    const Rational q1(1, 4), q2(1, 2), q3(1, 4);
    DenseMatrix mix(k(identity_distribution(5)).rows(), k(identity_distribution(5)).cols());
    for (unsigned r = 0; r <= 5; ++r) {
      const Rational w = Rational(binomial(5, r)) * rational_pow(q2, 5 - r) * rational_pow(1 - q2, r);
      const PieceDistribution p = r == 0 ? identity_distribution(5) : binomial_top_or_bottom_r(5, q1 / (q1 + q3), r);
      mix = mix + k(p).scaled(w);
    }
    return k(trinomial_top_or_bottom(5, q1, q2, q3)) == mix ? Failure() : Failure("matrices differ");
  });
  return run.take();
}

}  // namespace

SuiteResult run_suite(std::string_view name) {
  if (name == "hopf-axioms") return hopf_axioms();
  if (name == "eta-harmonic") return eta_harmonic();
  if (name == "spectrum-exact") return spectrum_exact();
  if (name == "eigenbasis") return eigenbasis();
  if (name == "lumping") return lumping();
  if (name == "absorption") return absorption();
  if (name == "paper-goldens") return paper_goldens();
  throw ContractError("unknown suite '" + std::string(name) + "'");
}

std::string format_table(const std::vector<SuiteResult>& results) {
  std::size_t suite_w = 5, check_w = 5;
  for (const auto& r : results) {
    suite_w = std::max(suite_w, r.suite.size());
    for (const auto& c : r.checks) check_w = std::max(check_w, c.name.size());
  }
  std::ostringstream out;
  out << std::left << std::setw(int(suite_w)) << "suite" << "  " << std::setw(int(check_w)) << "check"
      << "  result\n";
  for (const auto& r : results)
    for (const auto& c : r.checks) {
      out << std::setw(int(suite_w)) << r.suite << "  " << std::setw(int(check_w)) << c.name << "  "
          << (c.passed ? "PASS" : "FAIL");
      if (!c.passed) out << "  " << c.detail;
      out << '\n';
    }
  return out.str();
}

}  // namespace dchain
