// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include "cli.hpp"

#include "dchain/catalog.hpp"
#include "dchain/fqsym.hpp"
#include "dchain/linalg.hpp"
#include "dchain/sim.hpp"
#include "dchain/spectral.hpp"
#include "dchain/verify.hpp"
#include "dchain/words.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

using namespace dchain;

namespace {

using Failure = std::optional<std::string>;

std::string text(const Rational& q) { return fraction_string(q); }

OperatorSpec op_of(OperatorKind kind) {
  OperatorSpec op;
  op.kind = kind;
  return op;
}

OperatorSpec binter(const Rational& q2) {
  OperatorSpec op = op_of(OperatorKind::binter);
  op.q2 = q2;
  return op;
}

TreeChainConfig company(const BasisElement& start, TreeModel model, const Rational& q2 = Rational(1, 2)) {
  TreeChainConfig c;
  c.start = start;
  c.model = model;
  c.q2 = q2;
  return c;
}

Permutation identity(unsigned n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 1u);
  return p;
}

Failure equal_dense(const TransitionMatrix& k, const DenseMatrix& want) {
  const DenseMatrix got = k.dense();
  for (std::size_t i = 0; i < want.rows(); ++i)
    for (std::size_t j = 0; j < want.cols(); ++j)
      if (got(i, j) != want(i, j))
        return "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + text(got(i, j)) + " vs " +
               text(want(i, j));
  return std::nullopt;
}

std::vector<BasisElement> pinned_order() {
  return {make_forest({vertex()}),
          make_forest({vertex(std::nullopt, {vertex("A")})}),
          make_forest({vertex(std::nullopt, {vertex("C")})}),
          make_forest({vertex(std::nullopt, {vertex("C", {vertex("D")})})}),
          make_forest({vertex(std::nullopt, {vertex("A"), vertex("C")})}),
          four_person_company()};
}

// Reference binomial-model entries. The first column is taken as given, so rows 4-6 do not
// sum to 1 unless q is 0 or 1; the library builds the stochastic first column instead.
DenseMatrix reference_binomial(const Rational& q) {
  const auto pw = [](const Rational& x, unsigned k) { return rational_pow(x, k); };
  const Rational p = 1 - q;
  DenseMatrix m(6, 6);
  m(0, 0) = 1;
  m(1, 0) = p * (1 + q), m(1, 1) = pw(q, 2);
  m(2, 0) = p * (1 + q), m(2, 2) = pw(q, 2);
  m(3, 0) = pw(p, 2) * (1 + 3 * q), m(3, 2) = 3 * pw(q, 2) * p, m(3, 3) = pw(q, 3);
  m(4, 0) = pw(p, 2) * (1 + 3 * q), m(4, 1) = Rational(3, 2) * pw(q, 2) * p, m(4, 2) = Rational(3, 2) * pw(q, 2) * p,
       m(4, 4) = pw(q, 3);
  m(5, 0) = pw(p, 3) * (1 + 4 * q), m(5, 1) = 2 * pw(q, 2) * pw(p, 2), m(5, 2) = 4 * pw(q, 2) * pw(p, 2),
       m(5, 3) = Rational(4, 3) * pw(q, 3) * p, m(5, 4) = Rational(8, 3) * pw(q, 3) * p, m(5, 5) = pw(q, 4);
  return m;
}

Failure criterion_golden_matrices() {
  DenseMatrix single(6, 6);
  single(0, 0) = 1;
  single(1, 0) = Rational(1, 2), single(1, 1) = Rational(1, 2);
  single(2, 0) = Rational(1, 2), single(2, 2) = Rational(1, 2);
  single(3, 2) = Rational(3, 4), single(3, 3) = Rational(1, 4);
  single(4, 1) = Rational(3, 8), single(4, 2) = Rational(3, 8), single(4, 4) = Rational(1, 4);
  single(5, 3) = Rational(1, 3), single(5, 4) = Rational(2, 3);
  const TransitionMatrix k = tree_chain_matrix(company(four_person_company(), TreeModel::single));
  if (k.states() != pinned_order()) return "state order differs";
  if (auto f = equal_dense(k, single)) return "single model " + *f;
  std::string bad;
  for (const Rational q : {Rational(1, 3), Rational(7, 10), Rational(1)}) {
    const TransitionMatrix b = tree_chain_matrix(company(four_person_company(), TreeModel::binomial, q));
    if (auto f = equal_dense(b, reference_binomial(q))) bad += (bad.empty() ? "" : "; ") + ("q = " + text(q) + " " + *f);
  }
  if (!bad.empty()) return "binomial model against the reference entries: " + bad;
  return std::nullopt;
}

Failure criterion_golden_eigenfunctions() {
  const std::vector<Vector> columns{{1, 1, 1, 1, 1, 1},
                                    {0, 1, 0, 0, Rational(3, 2), 2},
                                    {0, 0, 1, 3, Rational(3, 2), 4},
                                    {0, 0, 0, 1, 0, Rational(4, 3)},
                                    {0, 0, 0, 0, 1, Rational(8, 3)},
                                    {0, 0, 0, 0, 0, 1}};
  for (const Rational q : {Rational(1, 3), Rational(1, 2), Rational(7, 10)})
    for (auto model : {TreeModel::single, TreeModel::binomial}) {
      const TreeChainConfig cfg = company(four_person_company(), model, q);
      const TransitionMatrix k = tree_chain_matrix(cfg);
      const std::vector<Rational> betas =
          model == TreeModel::single
              ? std::vector<Rational>{1, Rational(1, 2), Rational(1, 2), Rational(1, 4), Rational(1, 4), 0}
              : std::vector<Rational>{1, q * q, q * q, q * q * q, q * q * q, q * q * q * q};
      for (std::size_t c = 0; c < 6; ++c) {
        // make_eigenfunction throws unless K f = beta f holds exactly.
        make_eigenfunction(k, Side::right, betas[c], columns[c]);
        if (c == 0) continue;
        const EigenFunction f = tree_eigenfunction(k.states()[c], cfg, k);
        if (f.values != columns[c]) return "column " + std::to_string(c + 1) + " differs from the table";
        if (f.eigenvalue != betas[c]) return "eigenvalue of column " + std::to_string(c + 1);
      }
    }
  return std::nullopt;
}

Failure criterion_fqsym_five() {
  for (const auto& op : {op_of(OperatorKind::ter), binter(Rational(1, 2))}) {
    const TransitionMatrix k = build_transition_matrix(todo_chain(op, 5));
    const auto fs = fqsym_eigenbasis(k, op, 5);
    if (fs.size() != 120) return op.name() + ": " + std::to_string(fs.size()) + " functions";
    DenseMatrix m(k.size(), fs.size());
    std::map<Rational, unsigned> counts;
    for (std::size_t c = 0; c < fs.size(); ++c) {
      for (std::size_t i = 0; i < k.size(); ++i) m(i, c) = fs[c].values[i];
      ++counts[fs[c].eigenvalue];
    }
    if (rank(m) != 120) return op.name() + ": rank " + std::to_string(rank(m));
    std::map<Rational, unsigned> want;
    for (unsigned j = 0; j <= 5; ++j) {
      const unsigned mult = j == 5 ? 1 : (j == 4 ? 0 : factorial(5 - j).get_ui() - factorial(4 - j).get_ui());
      if (mult) want[op.family_eigenvalue(5, j)] += mult;
    }
    if (op.kind == OperatorKind::ter) {
      const std::map<Rational, unsigned> stated{{Rational(1), 1}, {Rational(3, 5), 1}, {Rational(2, 5), 4},
                                                 {Rational(1, 5), 18}, {Rational(0), 96}};
      if (want != stated) return "multiplicity formula disagrees with the stated counts";
    }
    if (counts != want) return op.name() + ": eigenvalue counts differ";
  }
  return std::nullopt;
}

Failure criterion_newest_position() {
  for (const auto& op : {op_of(OperatorKind::ter), binter(Rational(1, 2))})
    for (const auto& [n, j, t] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{{5, 2, 1}, {5, 2, 3}, {4, 1, 2}})
      if (!newest_position_distribution(n, j, t, op).agree())
        return op.name() + " at (" + std::to_string(n) + "," + std::to_string(j) + "," + std::to_string(t) + ")";
  return std::nullopt;
}

Failure criterion_equidistribution() {
  const Word deck{1, 2, 3, 4};
  for (const auto& op : {op_of(OperatorKind::ter), binter(Rational(1, 3))}) {
    const TransitionMatrix todo = build_transition_matrix(todo_chain(op, 4));
    const TransitionMatrix shuffle = build_transition_matrix(shuffle_chain(op.distribution(4), deck));
    for (unsigned t = 1; t <= 3; ++t) {
      std::map<std::vector<unsigned>, Rational> a, b;
      for (const auto& [x, p] : distribution_at_time(todo, make_permutation(AlgebraId::fqsym, identity(4)), t))
        a[permutation_of(x)] = p;
      for (const auto& [x, p] : distribution_at_time(shuffle, make_word(AlgebraId::shuffle, deck), t)) b[word_of(x)] = p;
      if (a != b) return op.name() + " at t = " + std::to_string(t);
    }
  }
  return std::nullopt;
}

Failure lumps_to(const TransitionMatrix& k, unsigned letters, const DenseMatrix& want, const std::string& label) {
  const LumpResult r = lump(k, last_letters_map(letters));
  const auto* q = std::get_if<TransitionMatrix>(&r);
  if (!q) return label + ": Dynkin condition fails";
  if (q->size() != want.rows()) return label + ": quotient has " + std::to_string(q->size()) + " states";
  if (auto f = equal_dense(*q, want)) return label + ": " + *f;
  return std::nullopt;
}

Failure criterion_lumping() {
  const TransitionMatrix ter3 = build_transition_matrix(todo_chain(op_of(OperatorKind::ter), 3));
  const DenseMatrix lazy = DenseMatrix::identity(6).scaled(Rational(2, 5)) + ter3.dense().scaled(Rational(3, 5));
  if (auto f = lumps_to(build_transition_matrix(todo_chain(op_of(OperatorKind::ter), 5)), 3, lazy, "ter_5")) return f;
  const OperatorSpec b = binter(Rational(1, 3));
  return lumps_to(build_transition_matrix(todo_chain(b, 5)), 3, build_transition_matrix(todo_chain(b, 3)).dense(),
                  "binter_5(1/3)");
}

Failure criterion_absorption() {
  for (auto model : {TreeModel::single, TreeModel::binomial}) {
    const TreeChainConfig cfg = company(four_person_company(), model, Rational(1, 2));
    const PieceDistribution p = cfg.distribution();
    const ChainSpec spec = make_chain(connes_kreimer_algebra(), p, ClosureStates{cfg.start, p});
    const TransitionMatrix k = build_transition_matrix(spec);
    for (unsigned t = 1; t <= 3; ++t) {
      const Rational a = absorption_via_qsym(spec, cfg.start, t), b = absorption_probability(k, cfg.start, t);
      if (a != b)
        return std::string(tree_model_name(model)) + ", t = " + std::to_string(t) + ": " + text(a) + " vs " + text(b);
    }
  }
  return std::nullopt;
}

Failure spectrum_against_charpoly(const TransitionMatrix& k, const SpectrumReport& r, const std::string& label) {
  const SpectrumCheck c = check_spectrum(k.dense(), r);
  return c.ok ? Failure() : Failure(label + ": " + c.witness);
}

Failure criterion_spectrum_oracle() {
  const auto dims = [](const HopfAlgebra& h, const StateConfig& config, unsigned n) {
    auto d = dimension_series(h, config, n);
    if (!d) throw ContractError("no dimension series");
    return *d;
  };
  for (unsigned n : {3u, 4u}) {
    Word deck(n);
    std::iota(deck.begin(), deck.end(), 1u);
    for (const auto& [label, p] : std::vector<std::pair<std::string, PieceDistribution>>{
             {"riffle", riffle_distribution(n)}, {"ter", top_to_random(n)}, {"taber", top_and_bottom_to_random(n)}}) {
      const std::string tag = label + " n=" + std::to_string(n);
      if (auto f = spectrum_against_charpoly(build_transition_matrix(shuffle_chain(p, deck)), distinct_deck_spectrum(p),
                                             "shuffle " + tag))
        return f;
      if (auto f = spectrum_against_charpoly(build_transition_matrix(rock_chain(p, n)),
                                             descent_spectrum(p, dims(sym_e_algebra(), AllPartitions{n}, n)),
                                             "sym-e " + tag))
        return f;
      const AllWords words{2, n};
      if (auto f = spectrum_against_charpoly(build_transition_matrix(make_chain(free_associative_algebra(), p, words)),
                                             descent_spectrum(p, dims(free_associative_algebra(), words, n)),
                                             "free-associative " + tag))
        return f;
    }
  }
  const PieceDistribution riffle = riffle_distribution(3);
  const DenseMatrix k = build_transition_matrix(shuffle_chain(riffle, {1, 2, 3})).dense();
  const Polynomial chi = characteristic_polynomial(k);
  for (const auto& [value, mult] :
       std::vector<std::pair<Rational, unsigned>>{{Rational(1), 1}, {Rational(1, 2), 3}, {Rational(1, 4), 2}}) {
    if (root_multiplicity(chi, value) != mult) return "riffle, 3 cards: algebraic multiplicity of " + text(value);
    if (geometric_multiplicity(k, value) != mult) return "riffle, 3 cards: eigenspace of " + text(value);
  }
  return std::nullopt;
}

Failure criterion_bintobrer_identities() {
  const auto k = [](const PieceDistribution& p) { return build_transition_matrix(rock_chain(p, 5)).dense(); };
  const Rational q(1, 3);
  const DenseMatrix tober = k(top_or_bottom_to_random(5, q));
  const DenseMatrix id = DenseMatrix::identity(tober.rows());
  // bintobrer_2 = tober (n tober - I) / (n - 1)
  if (k(binomial_top_or_bottom_r(5, q, 2)) != tober * (tober.scaled(5) - id).scaled(Rational(1, 4)))
    return "bintobrer_2(1/3) differs from the falling-factorial polynomial";
  const Rational q1(1, 4), q2(1, 2), q3(1, 4);
  DenseMatrix mix(id.rows(), id.cols());
  for (unsigned r = 0; r <= 5; ++r) {
    const Rational w = Rational(binomial(5, r)) * rational_pow(q2, 5 - r) * rational_pow(1 - q2, r);
    mix = mix + k(r == 0 ? identity_distribution(5) : binomial_top_or_bottom_r(5, q1 / (q1 + q3), r)).scaled(w);
  }
  if (k(trinomial_top_or_bottom(5, q1, q2, q3)) != mix) return "trintober(1/4, 1/2, 1/4) differs from the mixture";
  return std::nullopt;
}

Element bracket(const HopfAlgebra& h, const Element& a, const Element& b) { return h.product(a, b) - h.product(b, a); }

Failure criterion_tabrer_eigenvectors() {
  const auto& h = free_associative_algebra();
  OperatorSpec op = op_of(OperatorKind::tabrer);
  op.r = 1;
  const ChainSpec spec = make_chain(h, op.distribution(5), DeckStates{Word{1, 2, 3, 4, 5}});
  const TransitionMatrix k = build_transition_matrix(spec);
  for (unsigned j = 0; j <= 3; ++j) {
    const unsigned m = 5 - j;
    // A primitive of degree m: the iterated commutator [..[[1, 2], 3].., m].
    Element p(make_word(AlgebraId::free_associative, {1}));
    for (unsigned letter = 2; letter <= m; ++letter) p = bracket(h, p, Element(make_word(AlgebraId::free_associative, {letter})));
    std::vector<BasisElement> cs;
    for (unsigned letter = m + 1; letter <= 5; ++letter) cs.push_back(make_word(AlgebraId::free_associative, {letter}));
    const Element v = t2r_eigenvector(h, op, 5, j, p, cs);
    if (v.empty()) return "zero vector at j = " + std::to_string(j);
    const Rational beta = op.family_eigenvalue(5, j);
    if (j < 2 && beta != 0) return "j = " + std::to_string(j) + " should give eigenvalue 0";
    // Throws unless the extracted function satisfies its eigen-equation exactly.
    extract_eigenfunction(k, h, v, Side::left, beta, "j=" + std::to_string(j));
  }
  return std::nullopt;
}

Failure criterion_rock_bound() {
  for (unsigned t = 0; t <= 10; ++t) {
    const BoundCheck b = rock_survival_bound({4}, 3, t);
    if (b.bound != rational_pow(Rational(1, 4), t) * 4) return "bound formula at t = " + std::to_string(t);
    if (!b.holds()) return "t = " + std::to_string(t) + ": " + text(b.value) + " > " + text(b.bound);
  }
  return std::nullopt;
}

Failure criterion_monte_carlo() {
  for (auto model : {TreeModel::single, TreeModel::binomial}) {
    const TreeChainConfig cfg = company(eight_person_company(), model, Rational(1, 2));
    const Observable f = team_count_observable({1, 2}, cfg);
    const SimReport r = estimate_expectation(tree_stepper(cfg), f, cfg.start, 2, 100000, 20261016);
    if (!r.prediction || !r.z_score) return std::string(tree_model_name(model)) + ": no prediction";
    if (*r.prediction != rational_pow(*f.eigenvalue, 2) * f.evaluate(cfg.start)) return "prediction is not beta^t f(x0)";
    if (std::abs(*r.z_score) >= 4)
      return std::string(tree_model_name(model)) + ": z = " + std::to_string(*r.z_score);
  }
  return std::nullopt;
}

Failure criterion_property_suites() {
  for (const auto& name : suite_names()) {
    const SuiteResult r = run_suite(name);
    if (const CheckRow* bad = r.first_failure()) return name + " / " + bad->name + ": " + bad->detail;
  }
  std::ostringstream out, err;
  const int code = cli::run({"dchain", "verify"}, out, err);
  if (code != cli::ok) return "verify exits " + std::to_string(code) + ": " + err.str();
  return std::nullopt;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget_seconds;  // 0: no time limit
    std::function<Failure()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "golden tree matrices (single; binomial at q = 1/3, 7/10, 1)", 1, criterion_golden_matrices},
      {2, "golden tree eigenfunctions, both models", 1, criterion_golden_eigenfunctions},
      {3, "relative-order eigenbasis of the n = 5 to-do list", 30, criterion_fqsym_five},
      {4, "newest-position law", 0, criterion_newest_position},
      {5, "to-do list and shuffle chain equidistribution", 0, criterion_equidistribution},
      {6, "last-letters lumpings", 0, criterion_lumping},
      {7, "tree absorption two ways", 0, criterion_absorption},
      {8, "spectrum oracle", 0, criterion_spectrum_oracle},
      {9, "bintobrer and trintober identities", 0, criterion_bintobrer_identities},
      {10, "tabrer_1 eigenvectors on words", 0, criterion_tabrer_eigenvectors},
      {11, "rock survival bound", 0, criterion_rock_bound},
      {12, "Monte-Carlo team count", 10, criterion_monte_carlo},
      {13, "property suites and verify", 0, criterion_property_suites},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Failure f;
    try {
      f = c.run();
    } catch (const std::exception& e) {
      f = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!f && c.budget_seconds > 0 && seconds > c.budget_seconds)
      f = "took " + std::to_string(seconds) + " s, budget " + std::to_string(c.budget_seconds) + " s";
    std::ostringstream time;
    time.precision(3);
    time << std::fixed << seconds;
    std::cout << (f ? "FAIL" : "PASS") << " criterion " << c.id << ": " << c.name << " (" << time.str() << " s)";
    if (f) std::cout << " -- " << *f;
    std::cout << '\n';
    failed += f ? 1 : 0;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
