#include "dchain/sym_e.hpp"

#include "codec.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace dchain {

BasisElement make_partition(const IntPartition& parts) {
  IntPartition p;
  for (unsigned v : parts)
    if (v) p.push_back(v);
  std::sort(p.begin(), p.end(), std::greater<>());
  return BasisElement{AlgebraId::sym_e, std::accumulate(p.begin(), p.end(), 0u), detail::encode_sequence(p)};
}

IntPartition partition_of(const BasisElement& b) { return detail::decode_sequence(b.payload); }

std::vector<CoproductTerm> syme_coproduct(const IntPartition& lambda, unsigned i) {
  const unsigned n = std::accumulate(lambda.begin(), lambda.end(), 0u);
  if (i > n) throw ContractError("coproduct split exceeds partition size");
  // Each part e_k contributes e_a (x) e_{k-a}; parts are independent factors.
  std::map<std::pair<IntPartition, IntPartition>, unsigned> counts;
  IntPartition left, right;
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t k, unsigned need) {
    if (k == lambda.size()) {
      if (need) return;
      IntPartition l, r;
      for (unsigned v : left)
        if (v) l.push_back(v);
      for (unsigned v : right)
        if (v) r.push_back(v);
      std::sort(l.begin(), l.end(), std::greater<>());
      std::sort(r.begin(), r.end(), std::greater<>());
      ++counts[{l, r}];
      return;
    }
    for (unsigned a = 0; a <= std::min(lambda[k], need); ++a) {
      left.push_back(a);
      right.push_back(lambda[k] - a);
      rec(k + 1, need - a);
      left.pop_back();
      right.pop_back();
    }
  };
  rec(0, i);
  std::vector<CoproductTerm> out;
  for (const auto& [lr, c] : counts) out.push_back({make_partition(lr.first), make_partition(lr.second), Rational(c)});
  return out;
}

std::vector<IntPartition> partitions_of(unsigned n) {
  std::vector<IntPartition> out;
  IntPartition cur;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned left, unsigned max_part) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (unsigned k = 1; k <= std::min(left, max_part); ++k) {
      cur.push_back(k);
      rec(left - k, k);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

nlohmann::json SymE::to_json(const BasisElement& b) const { return partition_of(b); }

BasisElement SymE::from_json(const nlohmann::json& j) const {
  if (!j.is_array()) throw ContractError("a partition must be a JSON array");
  IntPartition p;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<long long>() <= 0) throw ContractError("partition parts must be positive");
    p.push_back(x.get<unsigned>());
  }
  if (!std::is_sorted(p.begin(), p.end(), std::greater<>())) throw ContractError("partition parts must be weakly decreasing");
  return make_partition(p);
}

std::string SymE::to_text(const BasisElement& b) const {
  IntPartition p = partition_of(b);
  std::string s = "e(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

Element SymE::do_product(const BasisElement& a, const BasisElement& b) const {
  IntPartition p = partition_of(a), q = partition_of(b);
  p.insert(p.end(), q.begin(), q.end());
  return Element(make_partition(p));
}

std::vector<CoproductTerm> SymE::do_coproduct(const BasisElement& x, unsigned left_degree) const {
  return syme_coproduct(partition_of(x), left_degree);
}

const SymE& sym_e_algebra() {
  static const SymE instance;
  return instance;
}

}  // namespace dchain
