#pragma once

#include "dchain/catalog.hpp"
#include "dchain/rng.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dchain {

// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0, carry_ = 0;
};

// Terminal states of N trajectories of length t. Trajectory i draws from CounterRng(seed, i),
// so the result does not depend on how trajectories are scheduled.
std::vector<BasisElement> run_trajectories(const Stepper& step, const BasisElement& x0, unsigned t,
                                           std::size_t trials, std::uint64_t seed);

struct SimReport {
  std::string observable;
  unsigned t = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean = 0;
  double standard_error = 0;
  std::optional<Rational> prediction;  // beta^t f(x0) when the observable is an eigenfunction
  std::optional<double> z_score;       // absent when the standard error is 0 and the mean is off
};

SimReport estimate_expectation(const Stepper& step, const Observable& f, const BasisElement& x0, unsigned t,
                               std::size_t trials, std::uint64_t seed);

// Sets the exact expectation and the z-score of the sample mean against it.
void attach_prediction(SimReport& r, const Rational& expected);

// Decimals are strings with 12 significant digits; the prediction is "num/den".
nlohmann::json sim_report_to_json(const SimReport& r);
SimReport sim_report_from_json(const nlohmann::json& j);

std::map<BasisElement, std::size_t> tally(const std::vector<BasisElement>& samples);

struct ChiSquared {
  double statistic = 0;
  unsigned degrees_of_freedom = 0;
  double p_value = 1;
  std::optional<BasisElement> outside_support;  // a sample the exact law gives probability 0
};

// Pearson test of sample frequencies against an exact law; cells with expected count
// below 5 are pooled.
ChiSquared chi_squared_test(const std::vector<BasisElement>& samples, const std::map<BasisElement, Rational>& law);

}  // namespace dchain
