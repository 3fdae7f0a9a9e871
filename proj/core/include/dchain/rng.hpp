#pragma once

#include "dchain/rational.hpp"

#include <cstdint>
#include <vector>

namespace dchain {

// Counter-based generator: the k-th output of stream (seed, s) is
//   splitmix64_mix(key + k * 0x9e3779b97f4a7c15),  key = splitmix64_mix(seed ^ splitmix64_mix(s + 0x9e3779b97f4a7c15)).
// Output k depends only on (seed, s, k), so streams can be split or replayed independently.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }

  result_type operator()();
  // Uniform on {0, ..., bound - 1}, unbiased (rejection).
  std::uint64_t below(std::uint64_t bound);
  // Uniform dyadic rational k / 2^53 in [0, 1).
  Rational uniform_rational();
  double uniform01();
  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Index i with probability weights[i] / sum(weights); weights must be >= 0 with positive sum.
std::size_t sample_index(const std::vector<Rational>& weights, CounterRng& rng);

}  // namespace dchain
