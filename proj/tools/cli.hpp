#pragma once

#include "dchain/rational.hpp"
#include "dchain/verify.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace dchain::cli {

// Exit codes.
inline constexpr int ok = 0;
inline constexpr int verification_failed = 1;
inline constexpr int bad_configuration = 2;

// argv[0] is the program name. Output goes to `out` unless --out names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parsers for the JSON the verify and absorb subcommands print.
nlohmann::json suite_results_to_json(const std::vector<SuiteResult>& results);
std::vector<SuiteResult> suite_results_from_json(const nlohmann::json& j);

struct AbsorptionReport {
  unsigned t = 0;
  Rational via_internal_product;
  Rational via_matrix_power;
  bool agree() const { return via_internal_product == via_matrix_power; }
};
nlohmann::json absorption_to_json(const AbsorptionReport& r);
AbsorptionReport absorption_from_json(const nlohmann::json& j);

}  // namespace dchain::cli
