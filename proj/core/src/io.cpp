#include "dchain/io.hpp"

#include "dchain/algebras.hpp"

#include <numeric>
#include <sstream>

namespace dchain {

namespace {

using nlohmann::json;

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed ") + what + ": " + e.what());
  }
}

json fraction_fields(const Rational& q) { return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}}; }

Rational fraction_from(const json& j) {
  return parse_rational(j.at("num").get<std::string>() + "/" + j.at("den").get<std::string>());
}

const HopfAlgebra& algebra_of_states(const std::vector<BasisElement>& states) {
  if (states.empty()) throw ContractError("empty state list");
  return algebra_for(states.front().algebra);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

Rational rational_field(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ContractError("rational parameters must be integers or \"num/den\" strings");
}

}  // namespace

json matrix_to_json(const TransitionMatrix& k) {
  const HopfAlgebra& h = algebra_of_states(k.states());
  json states = json::array(), rows = json::array();
  for (const auto& s : k.states()) states.push_back(h.to_json(s));
  for (std::size_t i = 0; i < k.size(); ++i)
    for (const auto& [j, p] : k.row(i)) {
      json e{{"from", i}, {"to", j}};
      e.update(fraction_fields(p));
      rows.push_back(std::move(e));
    }
  return {{"algebra", algebra_name(h.id())}, {"states", states}, {"rows", rows}};
}

TransitionMatrix matrix_from_json(const json& j) {
  return guarded("matrix", [&] {
    const HopfAlgebra& h = algebra_for(algebra_from_name(j.at("algebra").get<std::string>()));
    std::vector<BasisElement> states;
    for (const auto& s : j.at("states")) states.push_back(h.from_json(s));
    std::vector<TransitionMatrix::Row> rows(states.size());
    for (const auto& e : j.at("rows")) {
      const auto from = e.at("from").get<std::size_t>(), to = e.at("to").get<std::size_t>();
      if (from >= states.size()) throw ContractError("row index out of range");
      if (!rows[from].emplace(to, fraction_from(e)).second) throw ContractError("repeated matrix entry");
    }
    return TransitionMatrix(std::move(states), std::move(rows));
  });
}

std::string matrix_to_csv(const TransitionMatrix& k) {
  const HopfAlgebra& h = algebra_of_states(k.states());
  std::ostringstream out;
  out << "from,to,probability\n";
  for (std::size_t i = 0; i < k.size(); ++i)
    for (const auto& [j, p] : k.row(i))
      out << csv_field(h.to_text(k.states()[i])) << ',' << csv_field(h.to_text(k.states()[j])) << ','
          << fraction_string(p) << '\n';
  return out.str();
}

json eigenfunction_to_json(const EigenFunction& f) {
  const HopfAlgebra& h = algebra_of_states(f.states);
  json states = json::array(), values = json::array();
  for (const auto& s : f.states) states.push_back(h.to_json(s));
  for (const auto& v : f.values) values.push_back(fraction_string(v));
  return {{"name", f.name},
          {"side", f.side == Side::left ? "left" : "right"},
          {"eigenvalue", fraction_string(f.eigenvalue)},
          {"algebra", algebra_name(h.id())},
          {"states", states},
          {"values", values}};
}

EigenFunction eigenfunction_from_json(const json& j) {
  return guarded("eigenfunction", [&] {
    EigenFunction f;
    f.name = j.at("name").get<std::string>();
    const auto side = j.at("side").get<std::string>();
    if (side != "left" && side != "right") throw ContractError("side must be left or right");
    f.side = side == "left" ? Side::left : Side::right;
    f.eigenvalue = parse_rational(j.at("eigenvalue").get<std::string>());
    const HopfAlgebra& h = algebra_for(algebra_from_name(j.at("algebra").get<std::string>()));
    for (const auto& s : j.at("states")) f.states.push_back(h.from_json(s));
    for (const auto& v : j.at("values")) f.values.push_back(parse_rational(v.get<std::string>()));
    if (f.states.size() != f.values.size()) throw ContractError("states and values differ in length");
    return f;
  });
}

std::string eigenfunctions_to_csv(const std::vector<EigenFunction>& fs) {
  std::ostringstream out;
  out << "name,side,eigenvalue,state,value\n";
  for (const auto& f : fs) {
    const HopfAlgebra& h = algebra_of_states(f.states);
    for (std::size_t i = 0; i < f.states.size(); ++i)
      out << csv_field(f.name) << ',' << (f.side == Side::left ? "left" : "right") << ','
          << fraction_string(f.eigenvalue) << ',' << csv_field(h.to_text(f.states[i])) << ','
          << fraction_string(f.values[i]) << '\n';
  }
  return out.str();
}

json distribution_to_json(const HopfAlgebra& h, const std::map<BasisElement, Rational>& law) {
  json terms = json::array();
  for (const auto& [x, p] : law) terms.push_back({{"state", h.to_json(x)}, {"probability", fraction_string(p)}});
  return {{"algebra", algebra_name(h.id())}, {"terms", terms}};
}

std::map<BasisElement, Rational> distribution_from_json(const json& j) {
  return guarded("distribution", [&] {
    const HopfAlgebra& h = algebra_for(algebra_from_name(j.at("algebra").get<std::string>()));
    std::map<BasisElement, Rational> out;
    for (const auto& t : j.at("terms"))
      out[h.from_json(t.at("state"))] += parse_rational(t.at("probability").get<std::string>());
    return out;
  });
}

json lump_result_to_json(const LumpResult& r) {
  if (const auto* k = std::get_if<TransitionMatrix>(&r)) return {{"lumpable", true}, {"matrix", matrix_to_json(*k)}};
  const auto& v = std::get<LumpViolation>(r);
  const HopfAlgebra& h = algebra_for(v.first.algebra);
  const HopfAlgebra& q = algebra_for(v.target_class.algebra);
  return {{"lumpable", false},
          {"violation",
           {{"algebra", algebra_name(h.id())},
            {"target_algebra", algebra_name(q.id())},
            {"first", h.to_json(v.first)},
            {"second", h.to_json(v.second)},
            {"target_class", q.to_json(v.target_class)},
            {"first_mass", fraction_string(v.first_mass)},
            {"second_mass", fraction_string(v.second_mass)}}}};
}

LumpResult lump_result_from_json(const json& j) {
  return guarded("lump result", [&]() -> LumpResult {
    if (j.at("lumpable").get<bool>()) return matrix_from_json(j.at("matrix"));
    const json& v = j.at("violation");
    const HopfAlgebra& h = algebra_for(algebra_from_name(v.at("algebra").get<std::string>()));
    const HopfAlgebra& q = algebra_for(algebra_from_name(v.at("target_algebra").get<std::string>()));
    return LumpViolation{h.from_json(v.at("first")), h.from_json(v.at("second")), q.from_json(v.at("target_class")),
                         parse_rational(v.at("first_mass").get<std::string>()),
                         parse_rational(v.at("second_mass").get<std::string>())};
  });
}

BasisElement tree_from_json(const json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "four") return four_person_company();
    if (name == "eight") return eight_person_company();
    return guarded("tree", [&] { return make_forest(forest_from_json(json::parse(name))); });
  }
  return guarded("tree", [&] { return make_forest(forest_from_json(j)); });
}

ChainConfig chain_config_from_json(const json& j) {
  return guarded("chain configuration", [&] {
    ChainConfig c;
    c.chain = j.at("chain").get<std::string>();
    if (c.chain != "tree" && c.chain != "todo" && c.chain != "shuffle" && c.chain != "rock")
      throw ContractError("chain must be one of tree, todo, shuffle, rock");
    if (j.contains("n") && !j.at("n").is_null()) c.n = j.at("n").get<unsigned>();
    if (j.contains("model")) {
      const json& m = j.at("model");
      if (m.contains("type")) c.model = m.at("type").get<std::string>();
      if (m.contains("kind")) c.kind = m.at("kind").get<std::string>();
      if (m.contains("r")) c.r = m.at("r").get<unsigned>();
      if (m.contains("deck")) c.deck = m.at("deck").get<Word>();
      if (m.contains("tree")) c.tree = m.at("tree");
    }
    if (j.contains("params")) {
      for (const auto& [key, value] : j.at("params").items()) {
        if (key == "q") c.q = rational_field(value);
        else if (key == "q1") c.q1 = rational_field(value);
        else if (key == "q2") c.q2 = rational_field(value);
        else if (key == "q3") c.q3 = rational_field(value);
        else throw ContractError("unknown parameter '" + key + "'");
      }
    }
    return c;
  });
}

json chain_config_to_json(const ChainConfig& c) {
  json model{{"type", c.model}, {"kind", c.kind}, {"r", c.r}};
  if (c.deck) model["deck"] = *c.deck;
  if (c.tree) model["tree"] = *c.tree;
  json out{{"chain", c.chain},
           {"model", model},
           {"n", nullptr},
           {"params",
            {{"q", fraction_string(c.q)},
             {"q1", fraction_string(c.q1)},
             {"q2", fraction_string(c.q2)},
             {"q3", fraction_string(c.q3)}}}};
  if (c.n) out["n"] = *c.n;
  return out;
}

OperatorSpec operator_from_config(const ChainConfig& c) {
  OperatorSpec op;
  op.kind = operator_kind_from_name(c.kind);
  op.r = c.r;
  op.q = c.q;
  op.q1 = c.q1;
  op.q2 = c.q2;
  op.q3 = c.q3;
  return op;
}

ConfiguredChain configure_chain(const ChainConfig& c, std::size_t cap) {
  ConfiguredChain out;
  if (c.chain == "tree") {
    TreeChainConfig t;
    t.start = c.tree ? tree_from_json(*c.tree) : four_person_company();
    t.model = tree_model_from_name(c.model);
    t.q1 = c.q1;
    t.q2 = c.q2;
    t.q3 = c.q3;
    t.validate();
    if (c.n && *c.n != t.n0()) throw ContractError("n does not match the size of the start tree");
    out.algebra = &connes_kreimer_algebra();
    out.start = t.start;
    out.n = t.n0();
    out.matrix = [t] { return tree_chain_matrix(t); };
    out.stepper = tree_stepper(t);
    if (t.model == TreeModel::vp) {
      const PieceDistribution p = t.distribution();
      out.spec = make_chain(connes_kreimer_algebra(), p, ClosureStates{t.start, p}, cap);
    }
    out.tree = t;
    return out;
  }

  const OperatorSpec op = operator_from_config(c);
  out.op = op;
  if (c.chain == "shuffle") {
    Word deck;
    if (c.deck) {
      deck = *c.deck;
    } else {
      if (!c.n) throw ContractError("shuffle chain needs n or a deck");
      deck.resize(*c.n);
      std::iota(deck.begin(), deck.end(), 1u);
    }
    if (c.n && *c.n != deck.size()) throw ContractError("n does not match the deck size");
    out.n = static_cast<unsigned>(deck.size());
    out.spec = shuffle_chain(op.distribution(out.n), deck, cap);
    out.start = make_word(AlgebraId::shuffle, deck);
  } else {
    if (!c.n || *c.n == 0) throw ContractError("this chain needs n >= 1");
    out.n = *c.n;
    if (c.chain == "todo") {
      out.spec = todo_chain(op, out.n, cap);
      Permutation id(out.n);
      std::iota(id.begin(), id.end(), 1u);
      out.start = make_permutation(AlgebraId::fqsym, id);
    } else {
      out.spec = rock_chain(op.distribution(out.n), out.n);
      out.start = make_partition({out.n});
    }
  }
  out.algebra = out.spec->algebra;
  const ChainSpec spec = *out.spec;
  out.matrix = [spec] { return build_transition_matrix(spec); };
  out.stepper = c.chain == "todo" ? todo_stepper(op, out.n) : generic_stepper(spec);
  return out;
}

}  // namespace dchain
