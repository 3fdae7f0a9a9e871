#include "dchain/algebras.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>
#include <string>

namespace dchain {

const HopfAlgebra& algebra_for(AlgebraId id) {
  switch (id) {
    case AlgebraId::shuffle: return shuffle_algebra();
    case AlgebraId::free_associative: return free_associative_algebra();
    case AlgebraId::fqsym: return fqsym_algebra();
    case AlgebraId::fqsym_dual: return fqsym_dual_algebra();
    case AlgebraId::connes_kreimer: return connes_kreimer_algebra();
    case AlgebraId::sym_e: return sym_e_algebra();
    case AlgebraId::other: break;
  }
  throw ContractError("no built-in algebra for this identifier");
}

StateCapExceeded::StateCapExceeded(std::size_t cap, std::size_t needed)
    : std::runtime_error("cap exceeded: state space needs at least " + std::to_string(needed) + " states, cap is " +
                         std::to_string(cap)),
      cap_(cap) {}

std::size_t default_state_cap() {
  if (const char* env = std::getenv("DCHAIN_STATE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 5000;
}

namespace {

void check_cap(std::size_t cap, std::size_t needed) {
  if (needed > cap) throw StateCapExceeded(cap, needed);
}

std::size_t count_rearrangements(Word deck) {
  std::sort(deck.begin(), deck.end());
  Integer total = factorial(deck.size());
  for (std::size_t i = 0; i < deck.size();) {
    std::size_t j = i;
    while (j < deck.size() && deck[j] == deck[i]) ++j;
    total /= factorial(j - i);
    i = j;
  }
  return total.fits_ulong_p() ? total.get_ui() : static_cast<std::size_t>(-1);
}

}  // namespace

std::vector<BasisElement> enumerate_states(const HopfAlgebra& h, const StateConfig& config, std::size_t cap) {
  std::vector<BasisElement> out;
  std::visit(
      [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, DeckStates>) {
          if (h.id() != AlgebraId::shuffle && h.id() != AlgebraId::free_associative)
            throw ContractError("deck states need a word algebra");
          check_cap(cap, count_rearrangements(c.deck));
          Word w = c.deck;
          std::sort(w.begin(), w.end());
          do out.push_back(make_word(h.id(), w));
          while (std::next_permutation(w.begin(), w.end()));
        } else if constexpr (std::is_same_v<C, AllWords>) {
          if (h.id() != AlgebraId::shuffle && h.id() != AlgebraId::free_associative)
            throw ContractError("word states need a word algebra");
          if (c.alphabet == 0 && c.n > 0) throw ContractError("empty alphabet");
          Integer count;
          mpz_ui_pow_ui(count.get_mpz_t(), c.alphabet, c.n);
          check_cap(cap, count.fits_ulong_p() ? count.get_ui() : static_cast<std::size_t>(-1));
          Word w(c.n, 1);
          while (true) {
            out.push_back(make_word(h.id(), w));
            std::size_t k = c.n;
            while (k > 0 && w[k - 1] == c.alphabet) w[--k] = 1;
            if (k == 0) break;
            ++w[k - 1];
          }
        } else if constexpr (std::is_same_v<C, AllPermutations>) {
          if (h.id() != AlgebraId::fqsym && h.id() != AlgebraId::fqsym_dual)
            throw ContractError("permutation states need FQSym or its dual");
          Integer count = factorial(c.n);
          check_cap(cap, count.fits_ulong_p() ? count.get_ui() : static_cast<std::size_t>(-1));
          Permutation p(c.n);
          for (unsigned i = 0; i < c.n; ++i) p[i] = i + 1;
          do out.push_back(make_permutation(h.id(), p));
          while (std::next_permutation(p.begin(), p.end()));
        } else if constexpr (std::is_same_v<C, AllPartitions>) {
          if (h.id() != AlgebraId::sym_e) throw ContractError("partition states need sym-e");
          auto parts = partitions_of(c.n);
          check_cap(cap, parts.size());
          for (const auto& p : parts) out.push_back(make_partition(p));
        } else {
          if (c.start.algebra != h.id()) throw ContractError("closure start lives in another algebra");
          if (c.start.degree != c.P.n()) throw ContractError("closure start degree differs from the operator degree");
          std::set<BasisElement> seen{c.start};
          std::deque<BasisElement> queue{c.start};
          const CompositionSum op = c.P.operator_sum();
          while (!queue.empty()) {
            BasisElement x = queue.front();
            queue.pop_front();
            for (const auto& [y, coeff] : descent_operator(h, x, op)) {
              if (seen.insert(y).second) {
                check_cap(cap, seen.size());
                queue.push_back(y);
              }
            }
          }
          out.assign(seen.begin(), seen.end());
        }
      },
      config);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<Integer>> dimension_series(const HopfAlgebra& h, const StateConfig& config,
                                                     unsigned max_degree) {
  std::vector<Integer> dims;
  for (unsigned n = 0; n <= max_degree; ++n) {
    switch (h.id()) {
      case AlgebraId::fqsym:
      case AlgebraId::fqsym_dual:
        dims.push_back(factorial(n));
        break;
      case AlgebraId::sym_e:
        dims.push_back(Integer(static_cast<unsigned long>(partitions_of(n).size())));
        break;
      case AlgebraId::shuffle:
      case AlgebraId::free_associative:
        if (const auto* w = std::get_if<AllWords>(&config)) {
          Integer d;
          mpz_ui_pow_ui(d.get_mpz_t(), w->alphabet, n);
          dims.push_back(d);
          break;
        }
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }
  return dims;
}

}  // namespace dchain
