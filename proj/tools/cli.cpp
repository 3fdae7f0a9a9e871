#include "cli.hpp"

#include "dchain/io.hpp"
#include "dchain/sim.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dchain::cli {

using nlohmann::json;

// ---------------------------------------------------------------- report parsers

json suite_results_to_json(const std::vector<SuiteResult>& results) {
  json out = json::array();
  for (const auto& r : results) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    out.push_back({{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}});
  }
  return out;
}

std::vector<SuiteResult> suite_results_from_json(const json& j) {
  try {
    std::vector<SuiteResult> out;
    for (const auto& s : j) {
      SuiteResult r;
      r.suite = s.at("suite").get<std::string>();
      for (const auto& c : s.at("checks"))
        r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("detail").get<std::string>()});
      out.push_back(std::move(r));
    }
    return out;
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed verify report: ") + e.what());
  }
}

json absorption_to_json(const AbsorptionReport& r) {
  return {{"t", r.t},
          {"via_internal_product", fraction_string(r.via_internal_product)},
          {"via_matrix_power", fraction_string(r.via_matrix_power)},
          {"agree", r.agree()}};
}

AbsorptionReport absorption_from_json(const json& j) {
  try {
    return {j.at("t").get<unsigned>(), parse_rational(j.at("via_internal_product").get<std::string>()),
            parse_rational(j.at("via_matrix_power").get<std::string>())};
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed absorption report: ") + e.what());
  }
}

namespace {

// ---------------------------------------------------------------- configuration

struct RunConfig {
  std::string config_path;
  std::optional<std::string> chain, model, kind, deck, tree;
  std::optional<unsigned> n, r;
  std::optional<std::string> q, q1, q2, q3;
  unsigned t = 1;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  std::string format;  // empty: the subcommand default (a table for verify, JSON elsewhere)
  std::string out_path;
  std::optional<std::size_t> state_cap;

  // simulate / lump / verify
  std::string observable;
  std::string s = "1";
  std::optional<unsigned> j;
  std::string map = "last-letters";
  unsigned k = 1;
  std::vector<std::string> suites;
};

void add_shared(CLI::App* app, RunConfig& c) {
  app->add_option("--config", c.config_path, "chain configuration JSON file");
  app->add_option("--chain", c.chain, "tree, todo, shuffle or rock");
  app->add_option("--model", c.model, "tree model: single, binomial or vp");
  app->add_option("--kind", c.kind, "descent operator for todo, shuffle and rock chains");
  app->add_option("--n", c.n, "degree");
  app->add_option("--r", c.r, "cards moved by the r-variants");
  app->add_option("--q", c.q, "\"num/den\" or integer");
  app->add_option("--q1", c.q1, "\"num/den\" or integer");
  app->add_option("--q2", c.q2, "\"num/den\" or integer");
  app->add_option("--q3", c.q3, "\"num/den\" or integer");
  app->add_option("--deck", c.deck, "comma-separated card values, e.g. 1,1,2,3");
  app->add_option("--tree", c.tree, "four, eight, or a forest in JSON");
  app->add_option("--t", c.t, "number of steps");
  app->add_option("--trials", c.trials, "simulated trajectories");
  app->add_option("--seed", c.seed, "simulation seed");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", c.out_path, "write to this file instead of standard output");
  app->add_option("--state-cap", c.state_cap, "largest state space to enumerate")->check(CLI::PositiveNumber);
}

Word parse_deck(const std::string& text) {
  Word deck;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw ContractError("deck entries must be positive integers: '" + text + "'");
    deck.push_back(static_cast<unsigned>(std::stoul(item)));
  }
  if (deck.empty()) throw ContractError("empty deck");
  return deck;
}

ChainConfig chain_config(const RunConfig& rc) {
  ChainConfig c;
  if (!rc.config_path.empty()) {
    std::ifstream in(rc.config_path);
    if (!in) throw ContractError("cannot read configuration file '" + rc.config_path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ContractError(std::string("configuration is not JSON: ") + e.what());
    }
    c = chain_config_from_json(j);
  }
  if (rc.chain) {
    c.chain = *rc.chain;
    if (c.chain != "tree" && c.chain != "todo" && c.chain != "shuffle" && c.chain != "rock")
      throw ContractError("chain must be one of tree, todo, shuffle, rock");
  }
  if (rc.model) c.model = *rc.model;
  if (rc.kind) c.kind = *rc.kind;
  if (rc.n) c.n = *rc.n;
  if (rc.r) c.r = *rc.r;
  if (rc.q) c.q = parse_rational(*rc.q);
  if (rc.q1) c.q1 = parse_rational(*rc.q1);
  if (rc.q2) c.q2 = parse_rational(*rc.q2);
  if (rc.q3) c.q3 = parse_rational(*rc.q3);
  if (rc.deck) c.deck = parse_deck(*rc.deck);
  if (rc.tree) c.tree = json(*rc.tree);
  return c;
}

std::size_t cap_of(const RunConfig& rc) { return rc.state_cap ? *rc.state_cap : default_state_cap(); }

class Output {
 public:
  Output(const RunConfig& rc, std::ostream& fallback) : rc_(rc), fallback_(fallback) {}

  void json_value(const json& j) { write(j.dump(2) + "\n"); }
  void text(const std::string& s) { write(s); }
  bool csv() const { return rc_.format == "csv"; }

 private:
  void write(const std::string& s) {
    if (rc_.out_path.empty()) {
      fallback_ << s;
      return;
    }
    std::ofstream f(rc_.out_path, std::ios::binary);
    if (!f) throw ContractError("cannot write '" + rc_.out_path + "'");
    f << s;
  }

  const RunConfig& rc_;
  std::ostream& fallback_;
};

// ---------------------------------------------------------------- subcommands

int cmd_matrix(const RunConfig& rc, Output& out) {
  const ConfiguredChain c = configure_chain(chain_config(rc), cap_of(rc));
  const TransitionMatrix k = c.matrix();
  if (out.csv())
    out.text(matrix_to_csv(k));
  else
    out.json_value(matrix_to_json(k));
  return ok;
}

SpectrumReport tree_spectrum(const TreeChainConfig& t, const TransitionMatrix& k) {
  std::map<Rational, Integer> counts;
  for (const auto& x : k.states()) {
    const unsigned m = x.degree;
    Rational beta(1);
    if (m > 1) beta = t.model == TreeModel::single ? Rational(Rational(t.n0() - m) / t.n0()) : rational_pow(t.q2, m);
    counts[beta] += 1;
  }
  SpectrumReport r;
  for (auto it = counts.rbegin(); it != counts.rend(); ++it) r.eigenvalues.push_back({it->first, it->second, {}, {}});
  return r;
}

std::vector<Integer> dims_of(const HopfAlgebra& h, const StateConfig& config, unsigned n) {
  auto d = dimension_series(h, config, n);
  if (!d) throw ContractError("no dimension series for this state space");
  return *d;
}

SpectrumReport predicted_spectrum(const ChainConfig& cc, const ConfiguredChain& c, const TransitionMatrix& k) {
  if (cc.chain == "tree") {
    if (c.tree->model == TreeModel::vp) throw ContractError("no spectrum formula for the vp model");
    return tree_spectrum(*c.tree, k);
  }
  const PieceDistribution p = c.spec->P;
  if (cc.chain == "todo") {
    std::vector<Integer> dims(c.n + 1);
    for (unsigned m = 0; m <= c.n; ++m) dims[m] = factorial(m);
    return t2r_spectrum(*c.op, c.n, dims, 1);
  }
  if (cc.chain == "rock") return descent_spectrum(p, dims_of(sym_e_algebra(), AllPartitions{c.n}, c.n));
  const Word deck = word_of(c.start);
  Word sorted = deck;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) return distinct_deck_spectrum(p);
  return descent_spectrum(p, dims_of(shuffle_algebra(), DeckStates{deck}, c.n));
}

int cmd_spectrum(const RunConfig& rc, Output& out, std::ostream& err) {
  const ChainConfig cc = chain_config(rc);
  const ConfiguredChain c = configure_chain(cc, cap_of(rc));
  const TransitionMatrix k = c.matrix();
  const SpectrumReport r = predicted_spectrum(cc, c, k);
  if (r.total() != Integer(static_cast<unsigned long>(k.size())))
    throw ContractError("multiplicities sum to " + r.total().get_str() + " but there are " +
                        std::to_string(k.size()) + " states");
  const SpectrumCheck check = check_spectrum(k.dense(), r);
  if (out.csv()) {
    std::ostringstream s;
    s << "eigenvalue,multiplicity\n";
    for (const auto& line : r.eigenvalues) s << fraction_string(line.value) << ',' << line.multiplicity.get_str() << '\n';
    out.text(s.str());
  } else {
    out.json_value(spectrum_to_json(r));
  }
  if (!check.ok) {
    err << "characteristic polynomial disagrees: " << check.witness << '\n';
    return verification_failed;
  }
  return ok;
}

void write_functions(Output& out, const std::vector<EigenFunction>& fs) {
  if (out.csv()) {
    out.text(eigenfunctions_to_csv(fs));
    return;
  }
  json arr = json::array();
  for (const auto& f : fs) arr.push_back(eigenfunction_to_json(f));
  out.json_value(arr);
}

int cmd_stationary(const RunConfig& rc, Output& out) {
  const ConfiguredChain c = configure_chain(chain_config(rc), cap_of(rc));
  const TransitionMatrix k = c.matrix();
  std::vector<EigenFunction> fs;
  if (c.spec) {
    fs = stationary_distributions(*c.spec, k);
  } else {
    // Tree-valued chain: the stationary laws are the point masses on absorbing states.
    for (std::size_t a : absorbing_states(k)) {
      Vector v(k.size());
      v[a] = 1;
      fs.push_back(make_eigenfunction(k, Side::left, 1, std::move(v), "absorbed"));
    }
  }
  write_functions(out, fs);
  return ok;
}

int cmd_eigenbasis(const RunConfig& rc, Output& out) {
  const ChainConfig cc = chain_config(rc);
  const ConfiguredChain c = configure_chain(cc, cap_of(rc));
  const TransitionMatrix k = c.matrix();
  std::vector<EigenFunction> fs;
  if (cc.chain == "tree" && c.tree->model != TreeModel::vp) {
    fs.push_back(make_eigenfunction(k, Side::right, 1, Vector(k.size(), Rational(1)), "constant"));
    for (const auto& t : k.states())
      if (t.degree >= 2) fs.push_back(tree_eigenfunction(t, *c.tree, k));
  } else if (cc.chain == "todo") {
    fs = fqsym_eigenbasis(k, *c.op, c.n);
  } else {
    throw ContractError("eigenbasis is available for the tree chain (single, binomial) and the to-do chain");
  }
  write_functions(out, fs);
  return ok;
}

std::vector<unsigned> parse_sizes(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw ContractError("team sizes must be nonnegative integers: '" + text + "'");
    out.push_back(static_cast<unsigned>(std::stoul(item)));
  }
  return out;
}

Observable observable_for(const RunConfig& rc, const ChainConfig& cc, const ConfiguredChain& c) {
  std::string name = rc.observable;
  if (name.empty()) name = cc.chain == "tree" ? (c.tree->model == TreeModel::vp ? "vp" : "team-count") : "at-start";
  if (name == "team-count") {
    if (cc.chain != "tree") throw ContractError("team-count needs the tree chain");
    return team_count_observable(parse_sizes(rc.s), *c.tree);
  }
  if (name == "vp") {
    if (cc.chain != "tree" || c.tree->model != TreeModel::vp) throw ContractError("vp needs the tree chain's vp model");
    const unsigned n0 = c.tree->n0();
    return vp_observable(rc.j.value_or(n0 >= 2 ? n0 - 2 : 0), *c.tree);
  }
  if (name == "at-start") {
    const BasisElement start = c.start;
    return {"at-start", [start](const BasisElement& x) { return Rational(x == start ? 1 : 0); }, std::nullopt};
  }
  if (name == "min-position") {
    if (cc.chain != "todo") throw ContractError("min-position needs the to-do chain");
    const unsigned j = rc.j.value_or(0);
    if (j >= c.n) throw ContractError("min-position needs j < n");
    return {"min-position(j=" + std::to_string(j) + ")",
            [j](const BasisElement& x) {
              const Permutation s = permutation_of(x);
              return Rational(static_cast<unsigned long>(std::min_element(s.begin() + j, s.end()) - s.begin() + 1));
            },
            std::nullopt};
  }
  throw ContractError("unknown observable '" + name + "' (team-count, vp, at-start, min-position)");
}

int cmd_simulate(const RunConfig& rc, Output& out) {
  const ChainConfig cc = chain_config(rc);
  const ConfiguredChain c = configure_chain(cc, cap_of(rc));
  if (rc.trials == 0) throw ContractError("trials must be positive");
  const Observable f = observable_for(rc, cc, c);
  SimReport r = estimate_expectation(c.stepper, f, c.start, rc.t, rc.trials, rc.seed);
  if (!r.prediction) {
    try {
      const TransitionMatrix k = c.matrix();
      Rational expected(0);
      for (const auto& [x, p] : distribution_at_time(k, c.start, rc.t)) expected += p * f.evaluate(x);
      attach_prediction(r, expected);
    } catch (const StateCapExceeded&) {
      // Too large for the exact law; the report carries the estimate only.
    }
  }
  const json j = sim_report_to_json(r);
  if (out.csv()) {
    std::ostringstream s;
    s << "observable,t,trials,seed,mean,standard_error,prediction,z_score\n";
    const auto field = [&](const char* key) { return j.at(key).is_null() ? std::string() : j.at(key).get<std::string>(); };
    s << f.name << ',' << r.t << ',' << r.trials << ',' << r.seed << ',' << field("mean") << ','
      << field("standard_error") << ',' << field("prediction") << ',' << field("z_score") << '\n';
    out.text(s.str());
  } else {
    out.json_value(j);
  }
  return ok;
}

int cmd_lump(const RunConfig& rc, Output& out, std::ostream& err) {
  const ChainConfig cc = chain_config(rc);
  if (cc.chain != "todo") throw ContractError("lump is available for the to-do chain");
  if (rc.map != "last-letters") throw ContractError("unknown map '" + rc.map + "'");
  const ConfiguredChain c = configure_chain(cc, cap_of(rc));
  if (rc.k == 0 || rc.k > c.n) throw ContractError("need 1 <= k <= n");
  const LumpResult r = lump(c.matrix(), last_letters_map(rc.k));
  if (const auto* k = std::get_if<TransitionMatrix>(&r); k && out.csv())
    out.text(matrix_to_csv(*k));
  else
    out.json_value(lump_result_to_json(r));
  if (std::holds_alternative<LumpViolation>(r)) {
    err << "not lumpable: see the violation record\n";
    return verification_failed;
  }
  return ok;
}

int cmd_absorb(const RunConfig& rc, Output& out, std::ostream& err) {
  const ChainConfig cc = chain_config(rc);
  const ConfiguredChain c = configure_chain(cc, cap_of(rc));
  const ChainSpec spec = [&] {
    if (cc.chain == "rock") return *c.spec;
    if (cc.chain != "tree") throw ContractError("absorb needs a free commutative algebra: the tree or rock chain");
    const PieceDistribution p = c.tree->distribution();
    return make_chain(connes_kreimer_algebra(), p, ClosureStates{c.start, p}, cap_of(rc));
  }();
  const TransitionMatrix k = build_transition_matrix(spec);
  AbsorptionReport r{rc.t, absorption_via_qsym(spec, c.start, rc.t), absorption_probability(k, c.start, rc.t)};
  if (out.csv()) {
    out.text("t,via_internal_product,via_matrix_power,agree\n" + std::to_string(r.t) + "," +
             fraction_string(r.via_internal_product) + "," + fraction_string(r.via_matrix_power) + "," +
             (r.agree() ? "true" : "false") + "\n");
  } else {
    out.json_value(absorption_to_json(r));
  }
  if (!r.agree()) {
    err << "absorption probabilities disagree at t = " << r.t << '\n';
    return verification_failed;
  }
  return ok;
}

int cmd_verify(const RunConfig& rc, Output& out, std::ostream& err) {
  std::vector<std::string> names = rc.suites.empty() ? suite_names() : rc.suites;
  std::vector<SuiteResult> results;
  for (const auto& name : names) results.push_back(run_suite(name));
  if (out.csv()) {
    std::ostringstream s;
    s << "suite,check,result,detail\n";
    for (const auto& r : results)
      for (const auto& c : r.checks)
        s << r.suite << ",\"" << c.name << "\"," << (c.passed ? "PASS" : "FAIL") << ",\"" << c.detail << "\"\n";
    out.text(s.str());
  } else if (rc.format == "json") {
    out.json_value(suite_results_to_json(results));
  } else {
    out.text(format_table(results));
  }
  for (const auto& r : results)
    if (const CheckRow* bad = r.first_failure()) {
      err << "first counterexample: " << r.suite << " / " << bad->name << ": " << bad->detail << '\n';
      return verification_failed;
    }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Exact Markov chains from descent operators on combinatorial Hopf algebras", "dchain"};
  app.require_subcommand(1);
  auto* matrix = app.add_subcommand("matrix", "transition matrix of a chain");
  auto* spectrum = app.add_subcommand("spectrum", "predicted eigenvalues, checked against the characteristic polynomial");
  auto* stationary = app.add_subcommand("stationary", "stationary distributions");
  auto* eigenbasis = app.add_subcommand("eigenbasis", "right eigenfunctions");
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimate of an observable at time t");
  auto* lumpcmd = app.add_subcommand("lump", "check a lumping and print the quotient chain");
  auto* absorb = app.add_subcommand("absorb", "absorption probability two ways");
  auto* verify = app.add_subcommand("verify", "run invariant suites");
  for (auto* sub : {matrix, spectrum, stationary, eigenbasis, simulate, lumpcmd, absorb, verify}) add_shared(sub, rc);
  simulate->add_option("--observable", rc.observable, "team-count, vp, at-start or min-position");
  simulate->add_option("--s", rc.s, "team sizes per department, e.g. 1,2");
  simulate->add_option("--j", rc.j, "index for vp and min-position");
  lumpcmd->add_option("--map", rc.map, "last-letters");
  lumpcmd->add_option("--k", rc.k, "number of trailing letters observed");
  verify->add_option("suites", rc.suites, "suite names (default: all)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return bad_configuration;
  }

  try {
    Output output(rc, out);
    if (*matrix) return cmd_matrix(rc, output);
    if (*spectrum) return cmd_spectrum(rc, output, err);
    if (*stationary) return cmd_stationary(rc, output);
    if (*eigenbasis) return cmd_eigenbasis(rc, output);
    if (*simulate) return cmd_simulate(rc, output);
    if (*lumpcmd) return cmd_lump(rc, output, err);
    if (*absorb) return cmd_absorb(rc, output, err);
    return cmd_verify(rc, output, err);
  } catch (const StateCapExceeded& e) {
    err << e.what() << '\n';
    return bad_configuration;
  } catch (const ContractError& e) {
    err << "configuration error: " << e.what() << '\n';
    return bad_configuration;
  } catch (const ChainError& e) {
    err << "invalid chain: " << e.what() << '\n';
    return bad_configuration;
  } catch (const EigenEquationError& e) {
    err << "eigen-equation failed: " << e.what() << '\n';
    return verification_failed;
  }
}

}  // namespace dchain::cli
