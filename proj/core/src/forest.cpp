#include "dchain/forest.hpp"

#include <algorithm>
#include <map>

namespace dchain {

namespace {

void append_escaped(std::string& out, const std::string& label) {
  for (char ch : label) {
    if (ch == '(' || ch == ')' || ch == '\\' || ch == '=') out.push_back('\\');
    out.push_back(ch);
  }
}

// Children first, then the label, so a vertex with children sorts before a labelled leaf.
std::string encode_tree(const DecoratedTree& t, bool is_root) {
  std::vector<std::string> kids;
  kids.reserve(t.children.size());
  for (const auto& c : t.children) kids.push_back(encode_tree(c, false));
  std::sort(kids.begin(), kids.end());
  std::string out = "(";
  for (const auto& k : kids) out += k;
  if (!is_root && t.label) {
    out.push_back('=');
    append_escaped(out, *t.label);
  }
  out.push_back(')');
  return out;
}

DecoratedTree parse_tree(const std::string& p, std::size_t& pos) {
  if (pos >= p.size() || p[pos] != '(') throw ContractError("malformed forest payload");
  ++pos;
  DecoratedTree t;
  while (pos < p.size() && p[pos] == '(') t.children.push_back(parse_tree(p, pos));
  if (pos < p.size() && p[pos] == '=') {
    ++pos;
    std::string label;
    while (pos < p.size() && p[pos] != ')') {
      if (p[pos] == '\\') ++pos;
      if (pos >= p.size()) throw ContractError("malformed forest payload");
      label.push_back(p[pos++]);
    }
    t.label = std::move(label);
  }
  if (pos >= p.size() || p[pos] != ')') throw ContractError("malformed forest payload");
  ++pos;
  return t;
}

unsigned count_vertices(const DecoratedTree& t) {
  unsigned n = 1;
  for (const auto& c : t.children) n += count_vertices(c);
  return n;
}

void flatten_into(const DecoratedTree& t, int parent, FlatForest& f) {
  const int v = static_cast<int>(f.parent.size());
  f.parent.push_back(parent);
  f.label.push_back(parent < 0 ? std::nullopt : t.label);
  f.children.emplace_back();
  if (parent >= 0) f.children[parent].push_back(v);
  for (const auto& c : t.children) flatten_into(c, v, f);
}

DecoratedTree rebuild(const FlatForest& f, int v, const std::vector<bool>& keep) {
  DecoratedTree t;
  t.label = f.label[v];
  for (int c : f.children[v])
    if (keep[c]) t.children.push_back(rebuild(f, c, keep));
  return t;
}

nlohmann::json tree_to_json(const DecoratedTree& t) {
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& c : t.children) kids.push_back(tree_to_json(c));
  return {{"label", t.label ? nlohmann::json(*t.label) : nlohmann::json(nullptr)}, {"children", kids}};
}

DecoratedTree tree_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ContractError("a tree must be a JSON object {\"label\": ..., \"children\": [...]}");
  DecoratedTree t;
  if (j.contains("label") && !j.at("label").is_null()) {
    if (!j.at("label").is_string()) throw ContractError("tree labels must be strings or null");
    t.label = j.at("label").get<std::string>();
  }
  if (j.contains("children")) {
    if (!j.at("children").is_array()) throw ContractError("tree children must be an array");
    for (const auto& c : j.at("children")) t.children.push_back(tree_from_json(c));
  }
  return t;
}

std::string tree_text(const DecoratedTree& t) {
  std::string s = t.label ? *t.label : "*";
  if (!t.children.empty()) {
    s += "[";
    for (std::size_t i = 0; i < t.children.size(); ++i) s += (i ? "," : "") + tree_text(t.children[i]);
    s += "]";
  }
  return s;
}

}  // namespace

DecoratedTree vertex(std::optional<std::string> label, std::vector<DecoratedTree> children) {
  return DecoratedTree{std::move(label), std::move(children)};
}

std::vector<int> FlatForest::roots() const {
  std::vector<int> r;
  for (std::size_t v = 0; v < parent.size(); ++v)
    if (parent[v] < 0) r.push_back(static_cast<int>(v));
  return r;
}

std::vector<unsigned> FlatForest::hook_lengths() const {
  std::vector<unsigned> h(size(), 1);
  for (std::size_t v = size(); v-- > 0;)
    if (parent[v] >= 0) h[parent[v]] += h[v];
  return h;
}

std::vector<unsigned> FlatForest::ancestor_counts() const {
  std::vector<unsigned> a(size(), 1);
  for (std::size_t v = 0; v < size(); ++v)
    if (parent[v] >= 0) a[v] = a[parent[v]] + 1;
  return a;
}

std::string encode_forest(const DecoratedForest& f) {
  std::vector<std::string> trees;
  trees.reserve(f.size());
  for (const auto& t : f) trees.push_back(encode_tree(t, true));
  std::sort(trees.begin(), trees.end());
  std::string out;
  for (const auto& t : trees) out += t;
  return out;
}

DecoratedForest decode_forest(const std::string& payload) {
  DecoratedForest f;
  std::size_t pos = 0;
  while (pos < payload.size()) f.push_back(parse_tree(payload, pos));
  return f;
}

BasisElement make_forest(const DecoratedForest& f) {
  unsigned n = 0;
  for (const auto& t : f) n += count_vertices(t);
  return BasisElement{AlgebraId::connes_kreimer, n, encode_forest(f)};
}

DecoratedForest forest_of(const BasisElement& b) { return decode_forest(b.payload); }

FlatForest flatten(const DecoratedForest& f) {
  FlatForest out;
  // Re-decode the canonical form so vertex numbering is canonical too.
  for (const auto& t : decode_forest(encode_forest(f))) flatten_into(t, -1, out);
  return out;
}

FlatForest flat_of(const BasisElement& b) {
  FlatForest out;
  for (const auto& t : decode_forest(b.payload)) flatten_into(t, -1, out);
  return out;
}

BasisElement induced_forest(const FlatForest& f, const std::vector<bool>& keep) {
  DecoratedForest out;
  for (std::size_t v = 0; v < f.size(); ++v)
    if (keep[v] && (f.parent[v] < 0 || !keep[f.parent[v]])) out.push_back(rebuild(f, static_cast<int>(v), keep));
  return make_forest(out);
}

void for_each_trunk(const FlatForest& f, std::size_t size, const std::function<void(const std::vector<bool>&)>& fn) {
  const std::size_t n = f.size();
  if (size > n) return;
  std::vector<bool> in(n, false);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t need) {
    if (need == 0) {
      fn(in);
      return;
    }
    if (v == n) return;
    const bool allowed = f.parent[v] < 0 || in[f.parent[v]];
    if (allowed) {
      in[v] = true;
      rec(v + 1, need - 1);
      in[v] = false;
    }
    rec(v + 1, need);
  };
  rec(0, size);
}

std::vector<CoproductTerm> ck_coproduct(const DecoratedForest& x, unsigned i) {
  const FlatForest f = flatten(x);
  if (i > f.size()) throw ContractError("coproduct split exceeds forest size");
  std::map<std::pair<BasisElement, BasisElement>, unsigned> counts;
  for_each_trunk(f, f.size() - i, [&](const std::vector<bool>& trunk) {
    std::vector<bool> crown(trunk.size());
    for (std::size_t v = 0; v < trunk.size(); ++v) crown[v] = !trunk[v];
    ++counts[{induced_forest(f, crown), induced_forest(f, trunk)}];
  });
  std::vector<CoproductTerm> out;
  for (const auto& [lr, c] : counts) out.push_back({lr.first, lr.second, Rational(c)});
  return out;
}

Integer hook_formula(const BasisElement& forest) {
  const FlatForest f = flat_of(forest);
  Integer r = factorial(f.size());
  for (unsigned h : f.hook_lengths()) r /= Integer(h);
  return r;
}

nlohmann::json forest_to_json(const DecoratedForest& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : decode_forest(encode_forest(f))) arr.push_back(tree_to_json(t));
  return arr;
}

DecoratedForest forest_from_json(const nlohmann::json& j) {
  DecoratedForest f;
  if (j.is_object()) {
    f.push_back(tree_from_json(j));
  } else if (j.is_array()) {
    for (const auto& t : j) f.push_back(tree_from_json(t));
  } else {
    throw ContractError("a forest must be a JSON array of trees");
  }
  return f;
}

std::string forest_text(const DecoratedForest& f) {
  const DecoratedForest c = decode_forest(encode_forest(f));
  if (c.empty()) return "{}";
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + tree_text(c[i]);
  return s;
}

std::vector<BasisElement> components(const BasisElement& forest) {
  std::vector<BasisElement> out;
  for (const auto& t : forest_of(forest)) out.push_back(make_forest({t}));
  return out;
}

BasisElement single_vertex_forest() { return make_forest({vertex()}); }

nlohmann::json ConnesKreimer::to_json(const BasisElement& b) const { return forest_to_json(forest_of(b)); }
BasisElement ConnesKreimer::from_json(const nlohmann::json& j) const { return make_forest(forest_from_json(j)); }
std::string ConnesKreimer::to_text(const BasisElement& b) const { return forest_text(forest_of(b)); }

Element ConnesKreimer::do_product(const BasisElement& a, const BasisElement& b) const {
  DecoratedForest f = forest_of(a);
  for (auto& t : forest_of(b)) f.push_back(std::move(t));
  return Element(make_forest(f));
}

std::vector<CoproductTerm> ConnesKreimer::do_coproduct(const BasisElement& x, unsigned left_degree) const {
  return ck_coproduct(forest_of(x), left_degree);
}

const ConnesKreimer& connes_kreimer_algebra() {
  static const ConnesKreimer instance;
  return instance;
}

}  // namespace dchain
