#include "dchain/sim.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace dchain {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

std::vector<BasisElement> run_trajectories(const Stepper& step, const BasisElement& x0, unsigned t,
                                           std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ContractError("need at least one trajectory");
  std::vector<BasisElement> out(trials, x0);
  auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      CounterRng rng(seed, i);
      for (unsigned s = 0; s < t; ++s) out[i] = step(out[i], rng);
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), trials / 256 + 1);
  if (workers <= 1 || t == 0) {
    run_range(0, trials);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        run_range(trials * w / workers, trials * (w + 1) / workers);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

SimReport estimate_expectation(const Stepper& step, const Observable& f, const BasisElement& x0, unsigned t,
                               std::size_t trials, std::uint64_t seed) {
  const auto ends = run_trajectories(step, x0, t, trials, seed);
  // Values are cached per distinct state; the tally is ordered, so sums are reproducible.
  CompensatedSum sum, sum_sq;
  for (const auto& [x, count] : tally(ends)) {
    const double v = f.evaluate(x).get_d();
    sum.add(v * double(count));
    sum_sq.add(v * v * double(count));
  }
  SimReport r;
  r.observable = f.name;
  r.t = t;
  r.trials = trials;
  r.seed = seed;
  const double n = double(trials);
  r.mean = sum.value() / n;
  if (trials > 1) {
    const double var = std::max(0.0, (sum_sq.value() - n * r.mean * r.mean) / (n - 1));
    r.standard_error = std::sqrt(var / n);
  }
  if (f.eigenvalue) attach_prediction(r, rational_pow(*f.eigenvalue, t) * f.evaluate(x0));
  return r;
}

void attach_prediction(SimReport& r, const Rational& expected) {
  r.prediction = expected;
  r.z_score.reset();
  const double gap = r.mean - expected.get_d();
  if (r.standard_error > 0)
    r.z_score = gap / r.standard_error;
  else if (std::abs(gap) <= 1e-12 * std::max(1.0, std::abs(r.mean)))
    r.z_score = 0.0;
}

nlohmann::json sim_report_to_json(const SimReport& r) {
  nlohmann::json j{{"observable", r.observable},
                   {"t", r.t},
                   {"trials", r.trials},
                   {"seed", r.seed},
                   {"mean", decimal_string(r.mean)},
                   {"standard_error", decimal_string(r.standard_error)},
                   {"prediction", nullptr},
                   {"z_score", nullptr}};
  if (r.prediction) j["prediction"] = fraction_string(*r.prediction);
  if (r.z_score) j["z_score"] = decimal_string(*r.z_score);
  return j;
}

SimReport sim_report_from_json(const nlohmann::json& j) {
  SimReport r;
  try {
    r.observable = j.at("observable").get<std::string>();
    r.t = j.at("t").get<unsigned>();
    r.trials = j.at("trials").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.mean = std::stod(j.at("mean").get<std::string>());
    r.standard_error = std::stod(j.at("standard_error").get<std::string>());
    if (!j.at("prediction").is_null()) r.prediction = parse_rational(j.at("prediction").get<std::string>());
    if (!j.at("z_score").is_null()) r.z_score = std::stod(j.at("z_score").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("malformed simulation report: ") + e.what());
  }
  if (r.trials == 0 || r.standard_error < 0) throw ContractError("simulation report violates N >= 1, stderr >= 0");
  return r;
}

std::map<BasisElement, std::size_t> tally(const std::vector<BasisElement>& samples) {
  std::map<BasisElement, std::size_t> out;
  for (const auto& s : samples) ++out[s];
  return out;
}

ChiSquared chi_squared_test(const std::vector<BasisElement>& samples, const std::map<BasisElement, Rational>& law) {
  ChiSquared out;
  const auto counts = tally(samples);
  for (const auto& [x, c] : counts) {
    auto it = law.find(x);
    if (it == law.end() || it->second == 0) {
      out.outside_support = x;
      out.p_value = 0;
      out.statistic = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  const double n = double(samples.size());
  std::vector<std::pair<double, double>> cells;  // expected, observed
  double pooled_e = 0, pooled_o = 0;
  for (const auto& [x, p] : law) {
    const double e = p.get_d() * n;
    auto it = counts.find(x);
    const double o = it == counts.end() ? 0.0 : double(it->second);
    if (e < 5) {
      pooled_e += e;
      pooled_o += o;
    } else {
      cells.emplace_back(e, o);
    }
  }
  if (pooled_e > 0) cells.emplace_back(pooled_e, pooled_o);
  CompensatedSum stat;
  for (const auto& [e, o] : cells) stat.add((o - e) * (o - e) / e);
  out.statistic = stat.value();
  if (cells.size() < 2) return out;
  out.degrees_of_freedom = static_cast<unsigned>(cells.size() - 1);
  out.p_value = boost::math::gamma_q(out.degrees_of_freedom / 2.0, out.statistic / 2.0);
  return out;
}

}  // namespace dchain
