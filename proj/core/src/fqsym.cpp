#include "dchain/fqsym.hpp"

#include "codec.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace dchain {

Permutation standardise(std::span<const unsigned> s) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
  Permutation p(s.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r && s[order[r]] == s[order[r - 1]]) throw ContractError("standardise: repeated letter " + std::to_string(s[order[r]]));
    p[order[r]] = static_cast<unsigned>(r + 1);
  }
  return p;
}

bool is_permutation_of_n(std::span<const unsigned> s) {
  std::vector<bool> seen(s.size() + 1, false);
  for (unsigned v : s) {
    if (v == 0 || v > s.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

BasisElement make_permutation(AlgebraId algebra, const Permutation& p) {
  if (!is_permutation_of_n(p)) throw ContractError("not a permutation in one-line notation");
  return BasisElement{algebra, static_cast<unsigned>(p.size()), detail::encode_sequence(p)};
}

Permutation permutation_of(const BasisElement& b) { return detail::decode_sequence(b.payload); }

namespace {

Permutation permutation_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ContractError("a permutation must be a JSON array");
  Permutation p;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<long long>() <= 0) throw ContractError("permutation letters must be positive");
    p.push_back(x.get<unsigned>());
  }
  if (!is_permutation_of_n(p)) throw ContractError("not a permutation in one-line notation");
  return p;
}

// Interleavings of u and v (disjoint letters, so each appears once).
void interleave(const Permutation& u, const Permutation& v, const std::function<void(const Permutation&)>& emit) {
  Permutation cur;
  cur.reserve(u.size() + v.size());
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
    if (i == u.size() && j == v.size()) {
      emit(cur);
      return;
    }
    if (i < u.size()) {
      cur.push_back(u[i]);
      rec(i + 1, j);
      cur.pop_back();
    }
    if (j < v.size()) {
      cur.push_back(v[j]);
      rec(i, j + 1);
      cur.pop_back();
    }
  };
  rec(0, 0);
}

}  // namespace

Element fqsym_product(const Permutation& s, const Permutation& t) {
  Permutation shifted(t);
  for (auto& v : shifted) v += static_cast<unsigned>(s.size());
  Element e;
  interleave(s, shifted, [&](const Permutation& p) { e.add(make_permutation(AlgebraId::fqsym, p), Rational(1)); });
  return e;
}

std::vector<CoproductTerm> fqsym_coproduct(const Permutation& s, unsigned i) {
  if (i > s.size()) throw ContractError("coproduct split exceeds permutation length");
  std::span<const unsigned> all(s);
  return {{make_permutation(AlgebraId::fqsym, standardise(all.subspan(0, i))),
           make_permutation(AlgebraId::fqsym, standardise(all.subspan(i))), Rational(1)}};
}

nlohmann::json FQSym::to_json(const BasisElement& b) const { return permutation_of(b); }
BasisElement FQSym::from_json(const nlohmann::json& j) const { return make_permutation(id(), permutation_from_json(j)); }
std::string FQSym::to_text(const BasisElement& b) const { return detail::sequence_text(permutation_of(b), '(', ')'); }

Element FQSym::do_product(const BasisElement& a, const BasisElement& b) const {
  return fqsym_product(permutation_of(a), permutation_of(b));
}

std::vector<CoproductTerm> FQSym::do_coproduct(const BasisElement& x, unsigned left_degree) const {
  return fqsym_coproduct(permutation_of(x), left_degree);
}

nlohmann::json FQSymDual::to_json(const BasisElement& b) const { return permutation_of(b); }
BasisElement FQSymDual::from_json(const nlohmann::json& j) const {
  return make_permutation(id(), permutation_from_json(j));
}
std::string FQSymDual::to_text(const BasisElement& b) const {
  return detail::sequence_text(permutation_of(b), '(', ')') + "*";
}

Element FQSymDual::do_product(const BasisElement& a, const BasisElement& b) const {
  const Permutation s = permutation_of(a), t = permutation_of(b);
  const unsigned k = static_cast<unsigned>(s.size()), n = k + static_cast<unsigned>(t.size());
  Element e;
  // Choose which values go to the prefix; arrange each part in its pattern.
  std::vector<unsigned> values(n);
  std::iota(values.begin(), values.end(), 1u);
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + k, true);
  do {
    std::vector<unsigned> pre, post;
    for (unsigned v = 0; v < n; ++v) (mask[v] ? pre : post).push_back(values[v]);
    Permutation p(n);
    for (unsigned i = 0; i < k; ++i) p[i] = pre[s[i] - 1];
    for (unsigned i = 0; i < t.size(); ++i) p[k + i] = post[t[i] - 1];
    e.add(make_permutation(id(), p), Rational(1));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return e;
}

std::vector<CoproductTerm> FQSymDual::do_coproduct(const BasisElement& x, unsigned left_degree) const {
  const Permutation s = permutation_of(x);
  Permutation low, high;
  for (unsigned v : s) (v <= left_degree ? low : high).push_back(v);
  return {{make_permutation(id(), low), make_permutation(id(), standardise(high)), Rational(1)}};
}

const FQSym& fqsym_algebra() {
  static const FQSym instance;
  return instance;
}

const FQSymDual& fqsym_dual_algebra() {
  static const FQSymDual instance;
  return instance;
}

}  // namespace dchain
