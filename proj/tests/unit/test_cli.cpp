#include "cli.hpp"

#include "dchain/io.hpp"
#include "dchain/sim.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;
using namespace dchain;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dchain");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == cli::bad_configuration);
  CHECK(run({"nonsense"}).code == cli::bad_configuration);
  CHECK(run({"matrix", "--chain", "todo", "--n", "3", "--format", "xml"}).code == cli::bad_configuration);
  CHECK(run({"matrix", "--chain", "todo", "--n", "3", "--q", "abc"}).code == cli::bad_configuration);
  CHECK(run({"matrix", "--chain", "galaxy"}).code == cli::bad_configuration);
  CHECK(run({"matrix", "--chain", "todo"}).code == cli::bad_configuration);
  CHECK(run({"matrix", "--chain", "tree", "--model", "vp", "--q2", "1/3"}).code == cli::bad_configuration);
  CHECK(run({"verify", "no-such-suite"}).code == cli::bad_configuration);
  CHECK(run({"absorb", "--chain", "todo", "--n", "3"}).code == cli::bad_configuration);
}

TEST_CASE("state cap") {
  const Result r = run({"matrix", "--chain", "todo", "--n", "7", "--state-cap", "1000"});
  CHECK(r.code == cli::bad_configuration);
  CHECK(r.err.find("cap exceeded") != std::string::npos);
}

TEST_CASE("matrix JSON parses back and is byte-stable") {
  const Result a = run({"matrix", "--chain", "tree", "--model", "single", "--tree", "four"});
  REQUIRE(a.code == cli::ok);
  TreeChainConfig t;
  t.start = four_person_company();
  CHECK(matrix_from_json(json::parse(a.out)) == tree_chain_matrix(t));
  CHECK(run({"matrix", "--chain", "tree", "--model", "single", "--tree", "four"}).out == a.out);
  const Result csv = run({"matrix", "--chain", "rock", "--kind", "riffle", "--n", "3", "--format", "csv"});
  CHECK(csv.code == cli::ok);
  CHECK(csv.out.rfind("from,to,probability", 0) == 0);
}

TEST_CASE("configuration file") {
  const char* dir = std::getenv("DCHAIN_TEST_TMP");
  const std::filesystem::path base = dir ? dir : std::filesystem::temp_directory_path().string();
  const auto path = base / "cli_config.json";
  std::ofstream(path) << R"({"chain": "todo", "n": 3, "model": {"kind": "binter"}, "params": {"q2": "1/3"}})";
  const Result r = run({"matrix", "--config", path.string()});
  REQUIRE(r.code == cli::ok);
  CHECK(matrix_from_json(json::parse(r.out)).size() == 6);
  CHECK(run({"matrix", "--config", (base / "missing.json").string()}).code == cli::bad_configuration);
}

TEST_CASE("stationary distribution of the to-do list is uniform") {
  const Result r = run({"stationary", "--chain", "todo", "--n", "4"});
  REQUIRE(r.code == cli::ok);
  const json j = json::parse(r.out);
  REQUIRE(j.size() == 1);
  const EigenFunction f = eigenfunction_from_json(j[0]);
  REQUIRE(f.values.size() == 24);
  for (const auto& v : f.values) CHECK(v == Rational(1, 24));
}

TEST_CASE("spectrum of ter_5 on the to-do list") {
  const Result r = run({"spectrum", "--chain", "todo", "--n", "5"});
  REQUIRE(r.code == cli::ok);
  const json j = json::parse(r.out);
  std::map<std::string, std::string> m;
  for (const auto& e : j["eigenvalues"]) m[e["value"].get<std::string>()] = e["multiplicity"].get<std::string>();
  CHECK(m.at("1/1") == "1");
  CHECK(m.at("3/5") == "1");
  CHECK(m.at("2/5") == "4");
  CHECK(m.at("1/5") == "18");
  CHECK(m.at("0/1") == "96");
}

TEST_CASE("tree spectrum and eigenbasis") {
  const Result s = run({"spectrum", "--chain", "tree", "--model", "binomial", "--q2", "1/3", "--tree", "eight"});
  CHECK(s.code == cli::ok);
  const Result e = run({"eigenbasis", "--chain", "tree", "--tree", "four"});
  REQUIRE(e.code == cli::ok);
  CHECK(json::parse(e.out).size() == 6);
  CHECK(run({"eigenbasis", "--chain", "todo", "--n", "3", "--format", "csv"}).code == cli::ok);
}

TEST_CASE("simulate") {
  const Result zero = run({"simulate", "--chain", "todo", "--n", "4", "--t", "0", "--trials", "100"});
  REQUIRE(zero.code == cli::ok);
  const SimReport r0 = sim_report_from_json(json::parse(zero.out));
  CHECK(r0.mean == 1.0);
  REQUIRE(r0.prediction);
  CHECK(*r0.prediction == 1);

  const std::vector<std::string> args{"simulate", "--chain",  "tree",  "--tree", "eight", "--s",
                                      "1,2",      "--t",      "2",     "--trials", "4000", "--seed", "3"};
  const Result a = run(args), b = run(args);
  REQUIRE(a.code == cli::ok);
  CHECK(a.out == b.out);
  const SimReport r = sim_report_from_json(json::parse(a.out));
  CHECK(*r.prediction == 40);
  CHECK(std::abs(*r.z_score) < 4);

  CHECK(run({"simulate", "--chain", "todo", "--n", "4", "--observable", "min-position", "--j", "1", "--t", "2",
             "--trials", "500", "--format", "csv"})
            .code == cli::ok);
  CHECK(run({"simulate", "--chain", "todo", "--n", "4", "--observable", "team-count"}).code == cli::bad_configuration);
}

TEST_CASE("lump and absorb") {
  const Result l = run({"lump", "--chain", "todo", "--n", "4", "--k", "2"});
  REQUIRE(l.code == cli::ok);
  CHECK(std::holds_alternative<TransitionMatrix>(lump_result_from_json(json::parse(l.out))));
  const Result bottom = run({"lump", "--chain", "todo", "--kind", "taber", "--n", "4", "--k", "2"});
  CHECK(bottom.code == cli::bad_configuration);
  const Result a = run({"absorb", "--chain", "rock", "--n", "4", "--t", "3"});
  REQUIRE(a.code == cli::ok);
  CHECK(cli::absorption_from_json(json::parse(a.out)).agree());
  CHECK(run({"absorb", "--chain", "tree", "--model", "binomial", "--q2", "1/2", "--t", "2"}).code == cli::ok);
}

TEST_CASE("verify") {
  const Result r = run({"verify", "paper-goldens", "--format", "json"});
  CHECK(r.code == cli::ok);
  const auto results = cli::suite_results_from_json(json::parse(r.out));
  REQUIRE(results.size() == 1);
  CHECK(results[0].passed());
  const Result table = run({"verify", "lumping"});
  CHECK(table.code == cli::ok);
  CHECK(table.out.find("PASS") != std::string::npos);
}

TEST_CASE("--out writes a file") {
  const char* dir = std::getenv("DCHAIN_TEST_TMP");
  const std::filesystem::path base = dir ? dir : std::filesystem::temp_directory_path().string();
  const auto path = base / "cli_out.json";
  std::filesystem::remove(path);
  const Result r = run({"matrix", "--chain", "todo", "--n", "3", "--out", path.string()});
  REQUIRE(r.code == cli::ok);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(matrix_from_json(json::parse(in)).size() == 6);
}
