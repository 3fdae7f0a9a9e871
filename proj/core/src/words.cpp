#include "dchain/words.hpp"

#include "codec.hpp"

#include <functional>
#include <map>

namespace dchain {

BasisElement make_word(AlgebraId algebra, const Word& w) {
  for (unsigned v : w)
    if (v == 0) throw ContractError("word letters must be positive integers");
  return BasisElement{algebra, static_cast<unsigned>(w.size()), detail::encode_sequence(w)};
}

Word word_of(const BasisElement& b) { return detail::decode_sequence(b.payload); }

namespace {

Word word_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ContractError("a word must be a JSON array of positive integers");
  Word w;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<long long>() <= 0) throw ContractError("word letters must be positive integers");
    w.push_back(x.get<unsigned>());
  }
  return w;
}

// Interleavings of u and v, counted with multiplicity.
std::map<Word, unsigned> interleavings(const Word& u, const Word& v) {
  std::map<Word, unsigned> out;
  Word cur;
  cur.reserve(u.size() + v.size());
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
    if (i == u.size() && j == v.size()) {
      ++out[cur];
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
  return out;
}

}  // namespace

Element shuffle_product(const Word& u, const Word& v) {
  Element e;
  for (const auto& [w, count] : interleavings(u, v)) e.add(make_word(AlgebraId::shuffle, w), Rational(count));
  return e;
}

std::vector<CoproductTerm> deconcatenate(const Word& w, unsigned i) {
  if (i > w.size()) throw ContractError("deconcatenation split exceeds word length");
  Word left(w.begin(), w.begin() + i), right(w.begin() + i, w.end());
  return {{make_word(AlgebraId::shuffle, left), make_word(AlgebraId::shuffle, right), Rational(1)}};
}

std::vector<CoproductTerm> deshuffle(const Word& w, unsigned i) {
  if (i > w.size()) throw ContractError("deshuffle split exceeds word length");
  std::map<std::pair<Word, Word>, unsigned> counts;
  const std::size_t n = w.size();
  std::vector<bool> chosen(n, false);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
    if (pos == n) {
      if (left) return;
      Word a, b;
      for (std::size_t k = 0; k < n; ++k) (chosen[k] ? a : b).push_back(w[k]);
      ++counts[{a, b}];
      return;
    }
    if (n - pos > left) rec(pos + 1, left);
    if (left) {
      chosen[pos] = true;
      rec(pos + 1, left - 1);
      chosen[pos] = false;
    }
  };
  rec(0, i);
  std::vector<CoproductTerm> out;
  for (const auto& [ab, c] : counts)
    out.push_back({make_word(AlgebraId::free_associative, ab.first), make_word(AlgebraId::free_associative, ab.second),
                   Rational(c)});
  return out;
}

// ---------------------------------------------------------------- shuffle algebra

nlohmann::json ShuffleAlgebra::to_json(const BasisElement& b) const { return word_of(b); }
BasisElement ShuffleAlgebra::from_json(const nlohmann::json& j) const { return make_word(id(), word_from_json(j)); }
std::string ShuffleAlgebra::to_text(const BasisElement& b) const { return detail::sequence_text(word_of(b), '[', ']'); }

Element ShuffleAlgebra::do_product(const BasisElement& a, const BasisElement& b) const {
  return shuffle_product(word_of(a), word_of(b));
}

std::vector<CoproductTerm> ShuffleAlgebra::do_coproduct(const BasisElement& x, unsigned left_degree) const {
  return deconcatenate(word_of(x), left_degree);
}

// ---------------------------------------------------------------- free associative algebra

nlohmann::json FreeAssociativeAlgebra::to_json(const BasisElement& b) const { return word_of(b); }
BasisElement FreeAssociativeAlgebra::from_json(const nlohmann::json& j) const { return make_word(id(), word_from_json(j)); }
std::string FreeAssociativeAlgebra::to_text(const BasisElement& b) const {
  return detail::sequence_text(word_of(b), '[', ']');
}

Element FreeAssociativeAlgebra::do_product(const BasisElement& a, const BasisElement& b) const {
  return Element(BasisElement{id(), a.degree + b.degree, a.payload + b.payload});
}

std::vector<CoproductTerm> FreeAssociativeAlgebra::do_coproduct(const BasisElement& x, unsigned left_degree) const {
  return deshuffle(word_of(x), left_degree);
}

const ShuffleAlgebra& shuffle_algebra() {
  static const ShuffleAlgebra instance;
  return instance;
}

const FreeAssociativeAlgebra& free_associative_algebra() {
  static const FreeAssociativeAlgebra instance;
  return instance;
}

}  // namespace dchain
