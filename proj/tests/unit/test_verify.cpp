#include "dchain/verify.hpp"
#include "dchain/rational.hpp"

#include <doctest.h>

using namespace dchain;

TEST_CASE("every suite passes") {
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    const SuiteResult r = run_suite(name);
    CHECK(!r.checks.empty());
    if (const CheckRow* f = r.first_failure()) FAIL_CHECK(f->name << ": " << f->detail);
    CHECK(r.passed());
  }
}

TEST_CASE("unknown suite") { CHECK_THROWS_AS(run_suite("no-such-suite"), ContractError); }

TEST_CASE("table layout") {
  SuiteResult r{"demo", {{"ok check", true, ""}, {"bad check", false, "x = 2"}}};
  CHECK_FALSE(r.passed());
  REQUIRE(r.first_failure());
  CHECK(r.first_failure()->name == "bad check");
  const std::string table = format_table({r});
  CHECK(table.find("PASS") != std::string::npos);
  CHECK(table.find("FAIL") != std::string::npos);
  CHECK(table.find("x = 2") != std::string::npos);
}
