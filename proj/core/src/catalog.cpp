#include "dchain/catalog.hpp"

#include "dchain/forest.hpp"
#include "dchain/fqsym.hpp"
#include "dchain/sym_e.hpp"
#include "dchain/words.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dchain {

namespace {

Rational ratio(const Integer& a, const Integer& b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

bool in_unit_interval(const Rational& q) { return q >= 0 && q <= 1; }

std::vector<int> descendants(const FlatForest& f, int v) {
  std::vector<int> out, stack(f.children[v].begin(), f.children[v].end());
  while (!stack.empty()) {
    int w = stack.back();
    stack.pop_back();
    out.push_back(w);
    stack.insert(stack.end(), f.children[w].begin(), f.children[w].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

BasisElement remove_vertex(const FlatForest& f, int v) {
  std::vector<bool> keep(f.size(), true);
  keep[v] = false;
  return induced_forest(f, keep);
}

// Removal law for one step: leaf-removed tree -> eta(T \ v) / eta(T).
std::map<BasisElement, Rational> one_removal(const BasisElement& tree) {
  const FlatForest f = flat_of(tree);
  if (f.size() < 2) throw ContractError("cannot remove a leaf from a single-vertex tree");
  const Integer total = hook_formula(tree);
  std::map<BasisElement, Rational> out;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (!f.is_leaf(static_cast<int>(v))) continue;
    BasisElement smaller = remove_vertex(f, static_cast<int>(v));
    out[smaller] += ratio(hook_formula(smaller), total);
  }
  return out;
}

void require_tree(const BasisElement& t) {
  if (t.algebra != AlgebraId::connes_kreimer) throw ContractError("expected a forest of the Connes-Kreimer algebra");
  if (t.degree == 0 || forest_of(t).size() != 1) throw ContractError("expected a single nonempty tree");
}

std::vector<Rational> binomial_law(unsigned n, const Rational& success) {
  std::vector<Rational> w(n + 1);
  for (unsigned r = 0; r <= n; ++r)
    w[r] = Rational(binomial(n, r)) * rational_pow(success, r) * rational_pow(1 - success, n - r);
  return w;
}

void append_row(std::vector<TransitionMatrix::Row>& rows, std::size_t i, std::size_t j, const Rational& p) {
  if (p == 0) return;
  auto& slot = rows[i][j];
  slot += p;
}

}  // namespace

Stepper generic_stepper(const ChainSpec& spec) {
  return [spec](const BasisElement& x, CounterRng& rng) { return step_sample(spec, x, rng); };
}

// ---------------------------------------------------------------- company trees

PieceDistribution TreeChainConfig::distribution() const {
  switch (model) {
    case TreeModel::single: return top_to_random(n0());
    case TreeModel::binomial: return binomial_top_to_random(n0(), q2);
    case TreeModel::vp: return trinomial_top_or_bottom(n0(), q1, q2, q3);
  }
  throw ContractError("unknown tree model");
}

void TreeChainConfig::validate() const {
  require_tree(start);
  if (!in_unit_interval(q2)) throw ContractError("q2 must lie in [0, 1]");
  if (model == TreeModel::vp) {
    if (!in_unit_interval(q1) || !in_unit_interval(q3)) throw ContractError("q1 and q3 must lie in [0, 1]");
    if (q1 + q2 + q3 != 1) throw ContractError("q1 + q2 + q3 must equal 1");
  }
}

TreeModel tree_model_from_name(std::string_view name) {
  if (name == "single") return TreeModel::single;
  if (name == "binomial") return TreeModel::binomial;
  if (name == "vp") return TreeModel::vp;
  throw ContractError("unknown tree model '" + std::string(name) + "' (single, binomial, vp)");
}

std::string_view tree_model_name(TreeModel m) {
  switch (m) {
    case TreeModel::single: return "single";
    case TreeModel::binomial: return "binomial";
    case TreeModel::vp: return "vp";
  }
  return "?";
}

BasisElement four_person_company() {
  return make_forest({vertex(std::nullopt, {vertex("A"), vertex("C", {vertex("D")})})});
}

BasisElement eight_person_company() {
  return make_forest({vertex(std::nullopt, {vertex("A", {vertex("B")}),
                                            vertex("C", {vertex("D"), vertex("E"), vertex("F", {vertex("G")})})})});
}

std::vector<BasisElement> unlabelled_trees(unsigned n) {
  if (n == 0) return {};
  std::vector<BasisElement> out;
  for (const auto& f : unlabelled_forests(n - 1)) out.push_back(make_forest({vertex(std::nullopt, forest_of(f))}));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BasisElement> unlabelled_forests(unsigned n) {
  static std::vector<std::vector<BasisElement>> memo{{make_forest({})}};
  static std::mutex guard;
  std::lock_guard lock(guard);
  while (memo.size() <= n) {
    const unsigned m = static_cast<unsigned>(memo.size());
    std::set<BasisElement> out;
    for (unsigned k = 1; k <= m; ++k) {
      std::vector<BasisElement> trees;
      for (const auto& f : memo[k - 1]) trees.push_back(make_forest({vertex(std::nullopt, forest_of(f))}));
      for (const auto& t : trees)
        for (const auto& rest : memo[m - k]) {
          DecoratedForest joined = forest_of(rest);
          joined.push_back(forest_of(t).front());
          out.insert(make_forest(joined));
        }
    }
    memo.emplace_back(out.begin(), out.end());
  }
  return memo[n];
}

std::vector<BasisElement> rooted_subtrees(const BasisElement& tree) {
  require_tree(tree);
  const FlatForest f = flat_of(tree);
  std::set<BasisElement> out;
  for (std::size_t k = 1; k <= f.size(); ++k)
    for_each_trunk(f, k, [&](const std::vector<bool>& keep) { out.insert(induced_forest(f, keep)); });
  return {out.begin(), out.end()};
}

BasisElement pad_with_singletons(const BasisElement& tree, unsigned n0) {
  require_tree(tree);
  if (tree.degree > n0) throw ContractError("tree larger than the padded degree");
  DecoratedForest f = forest_of(tree);
  for (unsigned i = tree.degree; i < n0; ++i) f.push_back(vertex());
  return make_forest(f);
}

BasisElement tree_part(const BasisElement& forest) {
  if (forest.degree == 0) throw ContractError("empty forest has no tree part");
  std::optional<BasisElement> big;
  for (const auto& c : components(forest)) {
    if (c.degree < 2) continue;
    if (big) throw ContractError("forest has more than one nontrivial component");
    big = c;
  }
  return big ? *big : single_vertex_forest();
}

std::vector<Rational> hook_walk_distribution(const FlatForest& tree, std::optional<int> start) {
  const int n = static_cast<int>(tree.size());
  // ends[v]: law of the final leaf for a walk currently at v; children come after parents.
  std::vector<std::vector<Rational>> ends(n, std::vector<Rational>(n));
  for (int v = n - 1; v >= 0; --v) {
    if (tree.is_leaf(v)) {
      ends[v][v] = 1;
      continue;
    }
    const auto below = descendants(tree, v);
    const Rational share(1, static_cast<unsigned long>(below.size()));
    for (int w : below)
      for (int u = 0; u < n; ++u) ends[v][u] += share * ends[w][u];
  }
  if (start) {
    if (*start < 0 || *start >= n) throw ContractError("hook walk start vertex out of range");
    return ends[*start];
  }
  std::vector<Rational> out(n);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u) out[u] += ends[v][u] / n;
  return out;
}

std::pair<int, BasisElement> hook_walk_remove(const BasisElement& tree, CounterRng& rng) {
  require_tree(tree);
  const FlatForest f = flat_of(tree);
  if (f.size() < 2) throw ContractError("hook walk needs at least two vertices");
  int v = static_cast<int>(rng.below(f.size()));
  while (!f.is_leaf(v)) {
    const auto below = descendants(f, v);
    v = below[rng.below(below.size())];
  }
  return {v, remove_vertex(f, v)};
}

std::map<BasisElement, Rational> removal_distribution(const BasisElement& tree, unsigned k) {
  require_tree(tree);
  if (k >= tree.degree) throw ContractError("at most deg T - 1 removals are possible");
  std::map<BasisElement, Rational> law{{tree, Rational(1)}};
  for (unsigned step = 0; step < k; ++step) {
    std::map<BasisElement, Rational> next;
    for (const auto& [t, p] : law)
      for (const auto& [s, q] : one_removal(t)) next[s] += p * q;
    law = std::move(next);
  }
  return law;
}

TransitionMatrix tree_chain_matrix_generic(const TreeChainConfig& cfg) {
  cfg.validate();
  const auto& ck = connes_kreimer_algebra();
  const PieceDistribution p = cfg.distribution();
  ChainSpec spec = make_chain(ck, p, ClosureStates{cfg.start, p});
  TransitionMatrix padded = build_transition_matrix(spec);
  if (cfg.model == TreeModel::vp) return padded;

  const std::vector<BasisElement> trees = rooted_subtrees(cfg.start);
  std::map<BasisElement, std::size_t> index;
  for (std::size_t i = 0; i < trees.size(); ++i) index[trees[i]] = i;
  std::vector<TransitionMatrix::Row> rows(trees.size());
  std::vector<bool> seen(trees.size(), false);
  const auto absorb = [&](const TransitionMatrix& k) {
    for (std::size_t x = 0; x < k.size(); ++x) {
      const std::size_t i = index.at(tree_part(k.states()[x]));
      if (seen[i]) continue;
      seen[i] = true;
      for (const auto& [y, w] : k.row(x)) append_row(rows, i, index.at(tree_part(k.states()[y])), w);
    }
  };
  absorb(padded);
  // With q2 = 1 nothing moves, so other subtrees need their own closure.
  for (std::size_t i = 0; i < trees.size(); ++i)
    if (!seen[i])
      absorb(build_transition_matrix(make_chain(ck, p, ClosureStates{pad_with_singletons(trees[i], cfg.n0()), p})));
  return TransitionMatrix(trees, std::move(rows));
}

TransitionMatrix tree_chain_matrix(const TreeChainConfig& cfg) {
  cfg.validate();
  if (cfg.model == TreeModel::vp) return tree_chain_matrix_generic(cfg);

  const unsigned n0 = cfg.n0();
  const std::vector<BasisElement> trees = rooted_subtrees(cfg.start);
  std::map<BasisElement, std::size_t> index;
  for (std::size_t i = 0; i < trees.size(); ++i) index[trees[i]] = i;
  std::vector<TransitionMatrix::Row> rows(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const BasisElement& t = trees[i];
    const unsigned n = t.degree;
    if (n == 1) {
      rows[i][i] = 1;
      continue;
    }
    if (cfg.model == TreeModel::single) {
      append_row(rows, i, i, ratio(n0 - n, n0));
      for (const auto& [s, q] : one_removal(t)) append_row(rows, i, index.at(s), ratio(n, n0) * q);
    } else {
      const auto r_law = binomial_law(n, 1 - cfg.q2);
      for (unsigned r = 0; r <= n; ++r) {
        if (r_law[r] == 0) continue;
        for (const auto& [s, q] : removal_distribution(t, std::min(r, n - 1)))
          append_row(rows, i, index.at(s), r_law[r] * q);
      }
    }
  }
  TransitionMatrix direct(trees, std::move(rows));
  TransitionMatrix generic = tree_chain_matrix_generic(cfg);
  if (!(direct == generic)) {
    for (std::size_t i = 0; i < trees.size(); ++i)
      if (direct.row(i) != generic.row(i))
        throw ChainError("firing formula disagrees with the Hopf construction", trees[i]);
  }
  return direct;
}

Stepper tree_stepper(const TreeChainConfig& cfg) {
  cfg.validate();
  if (cfg.model == TreeModel::vp) {
    const PieceDistribution p = cfg.distribution();
    return generic_stepper(make_chain(connes_kreimer_algebra(), p, ClosureStates{cfg.start, p}));
  }
  const unsigned n0 = cfg.n0();
  const TreeModel model = cfg.model;
  const Rational q2 = cfg.q2;
  return [n0, model, q2](const BasisElement& t, CounterRng& rng) {
    const unsigned n = t.degree;
    if (n < 2) return t;
    unsigned removals = 0;
    if (model == TreeModel::single) {
      removals = rng.below(n0) < n0 - n ? 0 : 1;
    } else {
      removals = std::min<unsigned>(static_cast<unsigned>(sample_index(binomial_law(n, 1 - q2), rng)), n - 1);
    }
    BasisElement out = t;
    for (unsigned k = 0; k < removals; ++k) out = hook_walk_remove(out, rng).second;
    return out;
  };
}

EigenFunction tree_eigenfunction(const BasisElement& subtree, const TreeChainConfig& cfg, const TransitionMatrix& k) {
  require_tree(subtree);
  if (subtree.degree < 2) throw ContractError("the single-vertex tree has no eigenfunction of this family");
  if (cfg.model == TreeModel::vp) throw ContractError("tree eigenfunctions are for the single and binomial models");
  const unsigned m = subtree.degree;
  const auto& states = k.states();
  if (std::find(states.begin(), states.end(), subtree) == states.end())
    throw ContractError("not a rooted subtree of the start tree");

  Vector values(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const BasisElement& t = states[i];
    if (t.degree < m) continue;
    const auto law = removal_distribution(t, t.degree - m);
    auto it = law.find(subtree);
    if (it != law.end()) values[i] = Rational(binomial(t.degree, m)) * it->second;
    if (t.degree == m && values[i] != (t == subtree ? 1 : 0))
      throw EigenEquationError("triangularity fails at " + forest_text(forest_of(t)));
  }
  const Rational beta =
      cfg.model == TreeModel::single ? ratio(cfg.n0() - m, cfg.n0()) : rational_pow(cfg.q2, m);
  return make_eigenfunction(k, Side::right, beta, std::move(values), "f[" + forest_text(forest_of(subtree)) + "]");
}

Observable team_count_observable(const std::vector<unsigned>& s, const TreeChainConfig& cfg) {
  require_tree(cfg.start);
  const FlatForest f = flat_of(cfg.start);
  std::vector<std::optional<std::string>> heads;
  for (int c : f.children[f.roots().front()]) heads.push_back(f.label[c]);
  std::sort(heads.begin(), heads.end());
  if (std::adjacent_find(heads.begin(), heads.end()) != heads.end())
    throw ContractError("department heads must carry distinct labels");
  if (s.size() > heads.size()) throw ContractError("more team sizes than departments");

  const unsigned total = std::accumulate(s.begin(), s.end(), 0u);
  // With every s_i zero, f(T) = n fails at the lone boss, so no eigenvalue is claimed.
  std::optional<Rational> beta;
  if (total > 0 && cfg.model == TreeModel::single && total + 1 <= cfg.n0())
    beta = ratio(cfg.n0() - 1 - total, cfg.n0());
  if (total > 0 && cfg.model == TreeModel::binomial) beta = rational_pow(cfg.q2, 1 + total);

  std::string name = "team-count(";
  for (std::size_t i = 0; i < s.size(); ++i) name += (i ? "," : "") + std::to_string(s[i]);
  name += ")";

  auto evaluate = [s, heads](const BasisElement& t) {
    const FlatForest g = flat_of(t);
    const auto h = g.hook_lengths();
    Rational value(static_cast<unsigned long>(g.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      unsigned size = 0;
      for (int c : g.children[g.roots().front()])
        if (g.label[c] == heads[i]) size = h[c];
      value *= Rational(binomial(size, s[i]));
    }
    return value;
  };
  return Observable{name, evaluate, beta};
}

Observable vp_observable(unsigned j, const TreeChainConfig& cfg) {
  const unsigned n0 = cfg.n0();
  if (j >= n0) throw ContractError("j must be below the start degree");
  if (cfg.q1 + cfg.q3 == 0) throw ContractError("q1 + q3 must be positive");
  const Rational up = cfg.q3 / (cfg.q1 + cfg.q3), down = cfg.q1 / (cfg.q1 + cfg.q3);
  const unsigned need = n0 - j;
  auto evaluate = [need, up, down](const BasisElement& x) {
    const FlatForest f = flat_of(x);
    const auto h = f.hook_lengths();
    const auto a = f.ancestor_counts();
    Rational sum(0);
    for (std::size_t u = 0; u < f.size(); ++u) {
      if (h[u] < need) continue;
      sum += Rational(binomial(h[u], need)) * rational_pow(up, a[u] - 1) * rational_pow(down, h[u]);
    }
    return sum;
  };
  return Observable{"fo(j=" + std::to_string(j) + ")", evaluate, std::nullopt};
}

BoundCheck vp_bound(const TreeChainConfig& cfg, const TransitionMatrix& forest_matrix, unsigned j, unsigned t) {
  if (j + 2 > cfg.n0()) throw ContractError("the bound is stated for j <= n0 - 2");
  const Observable fo = vp_observable(j, cfg);
  BoundCheck out;
  for (const auto& [x, p] : distribution_at_time(forest_matrix, cfg.start, t)) out.value += p * fo.evaluate(x);

  const unsigned n0 = cfg.n0();
  const FlatForest f = flat_of(cfg.start);
  const auto h = f.hook_lengths();
  const auto a = f.ancestor_counts();
  Integer worst = 0;
  for (std::size_t u = 0; u < f.size(); ++u)
    if (h[u] >= n0 - j) worst = std::max(worst, Integer(binomial(n0, a[u] - 1)));
  out.bound = rational_pow(cfg.q2, (n0 - j) * t) * fo.evaluate(cfg.start) * Rational(worst);
  return out;
}

std::pair<Rational, Rational> hook_ratio_sides(const BasisElement& forest, const BasisElement& middle, unsigned i) {
  require_tree(middle);
  const unsigned n = forest.degree, m = middle.degree;
  if (m > n || i > n - m) throw ContractError("need deg T' <= n and i <= n - deg T'");
  const unsigned j = n - m;
  const auto& ck = connes_kreimer_algebra();

  std::vector<unsigned> parts(j - i, 1);
  parts.push_back(m);
  parts.insert(parts.end(), i, 1);
  Tensor key(j - i, single_vertex_forest());
  key.push_back(middle);
  key.insert(key.end(), i, single_vertex_forest());
  const Rational lhs = ck.refined_coproduct(forest, WeakComposition(parts)).coefficient(key) / ck.eta(forest);

  const FlatForest f = flat_of(forest);
  const auto hx = f.hook_lengths();
  const std::size_t size = f.size();
  if (size > 20) throw ContractError("hook ratio check is exponential; keep the forest small");
  auto members = [&](unsigned mask) {
    std::vector<bool> in(size);
    for (std::size_t v = 0; v < size; ++v) in[v] = (mask >> v) & 1u;
    return in;
  };
  // Descendant counts inside a subset.
  auto hooks_within = [&](const std::vector<bool>& in) {
    std::vector<unsigned> h(size, 0);
    for (std::size_t v = size; v-- > 0;) {
      if (!in[v]) continue;
      h[v] += 1;
      if (f.parent[v] >= 0 && in[f.parent[v]]) h[f.parent[v]] += h[v];
    }
    return h;
  };

  Rational sum(0);
  for_each_trunk(f, i, [&](const std::vector<bool>& s) {
    const auto hs = hooks_within(s);
    Rational weight(1);
    for (std::size_t v = 0; v < size; ++v)
      if (s[v]) weight *= ratio(hx[v], hs[v]);
    for (unsigned mask = 0; mask < (1u << size); ++mask) {
      if (static_cast<unsigned>(__builtin_popcount(mask)) != m) continue;
      const auto t = members(mask);
      bool ok = true;
      unsigned tops = 0;
      for (std::size_t v = 0; v < size && ok; ++v) {
        if (!t[v]) continue;
        if (s[v]) ok = false;
        const int p = f.parent[v];
        if (p >= 0 && !s[p] && !t[p]) ok = false;
        if (p < 0 || !t[p]) ++tops;
      }
      if (!ok || tops != 1 || induced_forest(f, t) != middle) continue;
      Rational prod(1);
      for (std::size_t v = 0; v < size; ++v)
        if (t[v]) prod *= hx[v];
      sum += weight * prod;
    }
  });
  WeakComposition three{i, m, j - i};
  const Rational rhs = sum / (Rational(factorial(m)) * Rational(multinomial(three)));
  return {lhs, rhs};
}

Rational trunk_hook_sum(const BasisElement& forest, unsigned i) {
  const FlatForest f = flat_of(forest);
  const auto hx = f.hook_lengths();
  Rational sum(0);
  for_each_trunk(f, i, [&](const std::vector<bool>& s) {
    std::vector<unsigned> hs(f.size(), 0);
    for (std::size_t v = f.size(); v-- > 0;) {
      if (!s[v]) continue;
      hs[v] += 1;
      if (f.parent[v] >= 0 && s[f.parent[v]]) hs[f.parent[v]] += hs[v];
    }
    Rational w(1);
    for (std::size_t v = 0; v < f.size(); ++v)
      if (s[v]) w *= ratio(hx[v], hs[v]);
    sum += w;
  });
  return sum;
}

// ---------------------------------------------------------------- to-do list (FQSym)

namespace {

// Law of the number of tasks taken from the top.
std::vector<Rational> todo_removal_law(const OperatorSpec& op, unsigned n) {
  std::vector<Rational> law(n + 1);
  switch (op.kind) {
    case OperatorKind::ter:
      if (n == 0) throw ContractError("to-do list needs n >= 1");
      law[1] = 1;
      break;
    case OperatorKind::trer:
      if (op.r > n) throw ContractError("r must not exceed n");
      law[op.r] = 1;
      break;
    case OperatorKind::binter:
      law = binomial_law(n, 1 - op.q2);
      break;
    default:
      throw ContractError("the to-do list chain takes ter, trer or binter");
  }
  return law;
}

}  // namespace

ChainSpec todo_chain(const OperatorSpec& op, unsigned n, std::size_t cap) {
  todo_removal_law(op, n);
  return make_chain(fqsym_algebra(), op.distribution(n), AllPermutations{n}, cap);
}

TransitionMatrix todo_matrix_direct(const OperatorSpec& op, unsigned n, std::size_t cap) {
  const auto law = todo_removal_law(op, n);
  const auto states = enumerate_states(fqsym_algebra(), AllPermutations{n}, cap);
  std::map<BasisElement, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = i;
  std::vector<TransitionMatrix::Row> rows(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Permutation sigma = permutation_of(states[i]);
    for (unsigned r = 0; r <= n; ++r) {
      if (law[r] == 0) continue;
      std::vector<unsigned> rest(sigma.begin() + r, sigma.end());
      Permutation base = standardise(rest);
      for (auto& v : base) v += r;
      // Insert 1, 2, ..., r one at a time, each at a uniform slot.
      std::vector<Permutation> outcomes{base};
      for (unsigned letter = 1; letter <= r; ++letter) {
        std::vector<Permutation> next;
        for (const auto& w : outcomes)
          for (std::size_t slot = 0; slot <= w.size(); ++slot) {
            Permutation u = w;
            u.insert(u.begin() + static_cast<std::ptrdiff_t>(slot), letter);
            next.push_back(std::move(u));
          }
        outcomes = std::move(next);
      }
      const Rational each = law[r] / static_cast<unsigned long>(outcomes.size());
      for (const auto& w : outcomes)
        append_row(rows, i, index.at(make_permutation(AlgebraId::fqsym, w)), each);
    }
  }
  return TransitionMatrix(states, std::move(rows));
}

Stepper todo_stepper(const OperatorSpec& op, unsigned n) {
  const auto law = todo_removal_law(op, n);
  return [law](const BasisElement& x, CounterRng& rng) {
    const Permutation sigma = permutation_of(x);
    const unsigned r = static_cast<unsigned>(sample_index(law, rng));
    std::vector<unsigned> rest(sigma.begin() + r, sigma.end());
    Permutation out = standardise(rest);
    for (auto& v : out) v += r;
    for (unsigned letter = 1; letter <= r; ++letter)
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(rng.below(out.size() + 1)), letter);
    return make_permutation(AlgebraId::fqsym, out);
  };
}

unsigned first_moved_index(const Permutation& tau) {
  for (unsigned k = 0; k < tau.size(); ++k)
    if (tau[k] != k + 1) return k;
  return static_cast<unsigned>(tau.size());
}

namespace {

Permutation tail_pattern(const Permutation& s, unsigned j) {
  std::vector<unsigned> tail(s.begin() + j, s.end());
  return standardise(tail);
}

// The pattern of (j+1) tau_{j+1} ... tau_n with the letter j+1 moved to the front.
Permutation moved_front_pattern(const Permutation& tau, unsigned j) {
  std::vector<unsigned> w{j + 1};
  for (unsigned k = j; k < tau.size(); ++k)
    if (tau[k] != j + 1) w.push_back(tau[k]);
  return standardise(w);
}

}  // namespace

Vector todo_eigenfunction_values(const Permutation& tau, const std::vector<BasisElement>& states) {
  if (!is_permutation_of_n(tau)) throw ContractError("tau is not a permutation");
  const unsigned n = static_cast<unsigned>(tau.size());
  const unsigned j = first_moved_index(tau);
  Vector out(states.size());
  if (j == n) {
    std::fill(out.begin(), out.end(), Rational(1));
    return out;
  }
  const Permutation plus = tail_pattern(tau, j), minus = moved_front_pattern(tau, j);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Permutation sigma = permutation_of(states[i]);
    if (sigma.size() != n) throw ContractError("state of the wrong degree");
    const Permutation pat = tail_pattern(sigma, j);
    if (pat == plus) out[i] = 1;
    else if (pat == minus) out[i] = -1;
  }
  return out;
}

std::vector<EigenFunction> fqsym_eigenbasis(const TransitionMatrix& k, const OperatorSpec& op, unsigned n) {
  const auto& dual = fqsym_dual_algebra();
  const BasisElement one = make_permutation(AlgebraId::fqsym_dual, {1});
  std::vector<EigenFunction> out;
  for (const auto& x : k.states()) {
    const Permutation tau = permutation_of(x);
    if (tau.size() != n) throw ContractError("state of the wrong degree");
    const unsigned j = first_moved_index(tau);
    const Rational beta = op.family_eigenvalue(n, j);
    std::string name = "f[" + fqsym_algebra().to_text(x) + "]";
    EigenFunction f = make_eigenfunction(k, Side::right, beta, todo_eigenfunction_values(tau, k.states()), name);
    if (j < n) {
      Element p;
      p.add(make_permutation(AlgebraId::fqsym_dual, tail_pattern(tau, j)), 1);
      p.add(make_permutation(AlgebraId::fqsym_dual, moved_front_pattern(tau, j)), -1);
      const Element v = t2r_eigenvector(dual, op, n, j, p, std::vector<BasisElement>(j, one));
      EigenFunction g = extract_eigenfunction(k, fqsym_algebra(), v, Side::right, beta, name);
      const Rational scale = Rational(1) / Rational(factorial(j));
      for (std::size_t i = 0; i < g.values.size(); ++i)
        if (g.values[i] * scale != f.values[i])
          throw EigenEquationError("relative-order rule disagrees with the dual construction for " + name);
    }
    out.push_back(std::move(f));
  }
  return out;
}

StateMap last_letters_map(unsigned k) {
  return [k](const BasisElement& x) {
    const Permutation s = permutation_of(x);
    if (s.size() < k) throw ContractError("permutation shorter than the observed suffix");
    return make_permutation(x.algebra, tail_pattern(s, static_cast<unsigned>(s.size()) - k));
  };
}

PositionLaw newest_position_distribution(unsigned n, unsigned j, unsigned t, const OperatorSpec& op) {
  if (j >= n) throw ContractError("need j < n");
  const TransitionMatrix k = build_transition_matrix(todo_chain(op, n));
  Permutation id(n);
  std::iota(id.begin(), id.end(), 1u);
  PositionLaw out;
  const Rational beta_t = rational_pow(op.family_eigenvalue(n, j), t);
  const Rational share(1, n - j);
  for (unsigned pos = j + 1; pos <= n; ++pos) {
    out.closed_form[pos] = pos == j + 1 ? Rational(share * (1 + beta_t * (n - j - 1))) : Rational(share * (1 - beta_t));
    out.exact[pos] = 0;
  }
  for (const auto& [x, p] : distribution_at_time(k, make_permutation(AlgebraId::fqsym, id), t)) {
    const Permutation s = permutation_of(x);
    const auto low = std::min_element(s.begin() + j, s.end());
    out.exact[static_cast<unsigned>(low - s.begin()) + 1] += p;
  }
  return out;
}

// ---------------------------------------------------------------- shuffles and rocks

ChainSpec shuffle_chain(const PieceDistribution& p, const Word& deck, std::size_t cap) {
  if (deck.empty()) throw ContractError("deck must be nonempty");
  if (deck.size() != p.n()) throw ContractError("distribution degree differs from deck size");
  return make_chain(shuffle_algebra(), p, DeckStates{deck}, cap);
}

ChainSpec rock_chain(const PieceDistribution& p, unsigned n) {
  if (n == 0 || p.n() != n) throw ContractError("rock chain needs n >= 1 matching the distribution");
  return make_chain(sym_e_algebra(), p, AllPartitions{n});
}

BoundCheck rock_survival_bound(const IntPartition& lambda, unsigned m, unsigned t) {
  const BasisElement start = make_partition(lambda);
  const unsigned n = start.degree;
  if (m == 0 || m > n) throw ContractError("need 1 <= n' <= n");
  const TransitionMatrix k = build_transition_matrix(rock_chain(top_to_random(n), n));
  BoundCheck out;
  for (const auto& [x, p] : distribution_at_time(k, start, t))
    if (partition_of(x).front() >= m) out.value += p;
  Integer pieces = 0;
  for (unsigned part : lambda) pieces += binomial(part, m);
  out.bound = rational_pow(ratio(n - m, n), t) * Rational(pieces);
  return out;
}

}  // namespace dchain
