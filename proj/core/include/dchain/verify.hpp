#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dchain {

struct CheckRow {
  std::string name;
  bool passed = false;
  std::string detail;  // counterexample or error text when failed
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckRow> checks;

  bool passed() const;
  const CheckRow* first_failure() const;
};

// hopf-axioms, eta-harmonic, spectrum-exact, eigenbasis, lumping, absorption, paper-goldens
const std::vector<std::string>& suite_names();
// Throws ContractError for an unknown name.
SuiteResult run_suite(std::string_view name);

// Fixed-width table: suite, check, PASS/FAIL, detail.
std::string format_table(const std::vector<SuiteResult>& results);

}  // namespace dchain
