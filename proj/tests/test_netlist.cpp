#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "redundis/modules.hpp"
#include "redundis/netlist.hpp"
#include "redundis/simulator.hpp"
#include "test_util.hpp"

using namespace redundis;

namespace {

bool has_issue(const ValidationReport& report, const std::string& code) {
  return std::any_of(report.issues.begin(), report.issues.end(),
                     [&](const Issue& i) { return i.code == code; });
}

Netlist single_and() {
  Netlist nl;
  nl.name = "and1";
  nl.inputs = {"a", "b"};
  nl.outputs = {"y"};
  nl.gates = {{"g0", GateKind::And, {"a", "b"}, "y"}};
  return nl;
}

}  // namespace

TEST_CASE("validate accepts the 3-input majority voter") {
  CHECK(validate(majority_voter(3, VoterConstruction::SumOfProducts)).ok());
}

TEST_CASE("validate reports a doubly driven net") {
  Netlist nl = single_and();
  nl.gates.push_back({"g1", GateKind::Or, {"a", "b"}, "y"});
  ValidationReport report = validate(nl);
  CHECK(has_issue(report, "multiple-drivers"));
  CHECK(report.issues.size() == 1);
}

TEST_CASE("validate reports a cycle naming its members") {
  Netlist nl;
  nl.name = "loop";
  nl.inputs = {"a"};
  nl.outputs = {"y"};
  nl.gates = {{"g0", GateKind::And, {"a", "w1"}, "y"},
              {"g1", GateKind::Buf, {"y"}, "w1"}};
  ValidationReport report = validate(nl);
  REQUIRE(has_issue(report, "cycle"));
  for (const auto& issue : report.issues) {
    if (issue.code == "cycle") {
      CHECK(issue.message.find("g0") != std::string::npos);
      CHECK(issue.message.find("g1") != std::string::npos);
    }
  }
}

TEST_CASE("validate reports fan-in violations and undriven nets") {
  Netlist nl;
  nl.inputs = {"a"};
  nl.outputs = {"y"};
  nl.gates = {{"g0", GateKind::And, {"a"}, "y"}};
  CHECK(has_issue(validate(nl), "bad-fan-in"));

  Netlist nl2 = single_and();
  nl2.gates[0].ins[1] = "ghost";
  CHECK(has_issue(validate(nl2), "undriven-net"));

  Netlist nl3 = single_and();
  nl3.outputs.push_back("nowhere");
  CHECK(has_issue(validate(nl3), "undriven-net"));
}

TEST_CASE("topological_order basics") {
  CHECK(topological_order(single_and()) == std::vector<std::string>{"g0"});

  Netlist wires;
  wires.name = "wires";
  wires.inputs = {"a"};
  wires.outputs = {"a"};
  CHECK(topological_order(wires).empty());

  Netlist loop = single_and();
  loop.gates.push_back({"g1", GateKind::Buf, {"y"}, "w"});
  loop.gates[0].ins[0] = "w";
  CHECK_THROWS_WITH_AS(topological_order(loop),
                       doctest::Contains("cycle"), Error);
}

TEST_CASE("topological_order is a linear extension of the driver relation") {
  auto check_partial_order = [](const Netlist& nl) {
    std::vector<std::string> order = topological_order(nl);
    REQUIRE(order.size() == nl.gates.size());
    std::map<std::string, size_t> pos;
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::map<std::string, std::string> driver;
    for (const auto& g : nl.gates) driver[g.out] = g.id;
    for (const auto& g : nl.gates) {
      for (const auto& in : g.ins) {
        auto it = driver.find(in);
        if (it != driver.end()) {
          CHECK(pos.at(it->second) < pos.at(g.id));
        }
      }
    }
  };
  // the three AND terms must come before the OR
  Netlist maj = majority_voter(3, VoterConstruction::SumOfProducts);
  std::vector<std::string> order = topological_order(maj);
  CHECK(order.back() == maj.gates.back().id);
  check_partial_order(maj);
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    check_partial_order(testutil::random_netlist(seed, 4, 25, 3));
  }
}

TEST_CASE("instantiate a NOT gate into an empty parent") {
  Netlist parent;
  parent.name = "top";
  parent.inputs = {"x"};
  parent.outputs = {"y"};
  Netlist child;
  child.name = "inv";
  child.inputs = {"a"};
  child.outputs = {"z"};
  child.gates = {{"g0", GateKind::Not, {"a"}, "z"}};
  Netlist merged = instantiate(parent, child, {{"a", "x"}, {"z", "y"}}, "u0_");
  REQUIRE(merged.gates.size() == 1);
  CHECK(merged.gates[0].id == "u0_g0");
  CHECK(merged.gates[0].ins == std::vector<std::string>{"x"});
  CHECK(merged.gates[0].out == "y");
  CHECK(validate(merged).ok());
}

TEST_CASE("instantiating a full adder twice doubles the gate count") {
  Netlist fa = full_adder();
  Netlist top;
  top.name = "two_adders";
  top.inputs = {"a", "b", "c"};
  top.outputs = {"s0", "c0", "s1", "c1"};
  PortBinding b0 = {{"a", "a"}, {"b", "b"}, {"cin", "c"},
                    {"sum", "s0"}, {"carry", "c0"}};
  PortBinding b1 = {{"a", "a"}, {"b", "b"}, {"cin", "c"},
                    {"sum", "s1"}, {"carry", "c1"}};
  top = instantiate(top, fa, b0, "fa0_");
  top = instantiate(top, fa, b1, "fa1_");
  CHECK(top.gates.size() == 2 * fa.gates.size());
  CHECK(validate(top).ok());
}

TEST_CASE("instantiate error paths") {
  Netlist parent = single_and();
  Netlist child = full_adder();

  PortBinding missing = {{"a", "a"}, {"b", "b"}, {"cin", "a"},
                         {"sum", "s"}};  // carry unbound
  CHECK_THROWS_WITH_AS(instantiate(parent, child, missing, "u_"),
                       doctest::Contains("carry"), Error);

  PortBinding clash = {{"a", "a"}, {"b", "b"}, {"cin", "a"},
                       {"sum", "y"}, {"carry", "c"}};  // y already driven
  CHECK_THROWS_WITH_AS(instantiate(parent, child, clash, "u_"),
                       doctest::Contains("already driven"), Error);

  PortBinding unknown = {{"a", "a"}, {"b", "b"}, {"cin", "a"}, {"sum", "s"},
                         {"carry", "c"}, {"zap", "z"}};
  CHECK_THROWS_WITH_AS(instantiate(parent, child, unknown, "u_"),
                       doctest::Contains("zap"), Error);

  // colliding gate ids
  Netlist p2 = single_and();
  Netlist inv;
  inv.name = "inv";
  inv.inputs = {"a"};
  inv.outputs = {"z"};
  inv.gates = {{"g0", GateKind::Not, {"a"}, "z"}};
  CHECK_THROWS_WITH_AS(instantiate(p2, inv, {{"a", "a"}, {"z", "q"}}, ""),
                       doctest::Contains("collides"), Error);
}

TEST_CASE("json round trip is the identity") {
  Netlist maj = majority_voter(3, VoterConstruction::SumOfProducts);
  Netlist back = from_json(to_json(maj));
  CHECK(back == maj);
  CHECK(back.name == maj.name);
  CHECK(back.inputs == maj.inputs);
  CHECK(back.outputs == maj.outputs);
  REQUIRE(back.gates.size() == maj.gates.size());
}

TEST_CASE("json schema errors carry a path") {
  CHECK_THROWS_WITH_AS(from_json("{\"name\":\"x\",\"inputs\":[],\"gates\":[]}"),
                       doctest::Contains("outputs"), Error);
  CHECK_THROWS_WITH_AS(
      from_json("{\"name\":\"x\",\"inputs\":[],\"outputs\":[],"
                "\"gates\":[{\"id\":\"g\",\"kind\":\"ANDY\",\"ins\":[],"
                "\"out\":\"y\"}]}"),
      doctest::Contains("$.gates[0].kind"), Error);
  CHECK_THROWS_AS(from_json("not json at all"), Error);
}

TEST_CASE("json round trip preserves the multiplier's function") {
  Netlist braun = braun_multiplier(4);
  Netlist back = from_json(to_json(braun));
  CHECK(back == braun);
  TruthTable t0 = truth_table(braun);
  TruthTable t1 = truth_table(back);
  CHECK(t0.rows == t1.rows);
}

TEST_CASE("verilog export") {
  VerilogExport v = export_structural_verilog(single_and());
  size_t and_count = 0;
  std::istringstream is(v.text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find("  and ") == 0) ++and_count;
  }
  CHECK(and_count == 1);
  CHECK(v.renames.empty());

  // majority voter: 3 and + 1 or primitives
  VerilogExport maj =
      export_structural_verilog(majority_voter(3, VoterConstruction::SumOfProducts));
  size_t ands = 0, ors = 0;
  std::istringstream ism(maj.text);
  while (std::getline(ism, line)) {
    if (line.find("  and ") == 0) ++ands;
    if (line.find("  or ") == 0) ++ors;
  }
  CHECK(ands == 3);
  CHECK(ors == 1);

  // deterministic output
  Netlist braun = braun_multiplier(4);
  CHECK(export_structural_verilog(braun).text ==
        export_structural_verilog(braun).text);
}

TEST_CASE("verilog export sanitizes awkward identifiers") {
  Netlist nl;
  nl.name = "bad name";
  nl.inputs = {"a", "2nd"};
  nl.outputs = {"out[0]"};
  nl.gates = {{"g 0", GateKind::And, {"a", "2nd"}, "out[0]"}};
  VerilogExport v = export_structural_verilog(nl);
  CHECK(!v.renames.empty());
  CHECK(v.text.find("out[0]") == std::string::npos);
  bool renamed_input = false;
  for (const auto& [from, to] : v.renames) {
    if (from == "2nd") {
      renamed_input = true;
      REQUIRE(!to.empty());
      CHECK((std::isalpha(static_cast<unsigned char>(to[0])) || to[0] == '_'));
    }
  }
  CHECK(renamed_input);
}

TEST_CASE("verilog export keeps input-fed outputs legal via a buffer") {
  Netlist nl;
  nl.name = "pass";
  nl.inputs = {"a", "b"};
  nl.outputs = {"y", "a"};
  nl.gates = {{"g0", GateKind::And, {"a", "b"}, "y"}};
  VerilogExport v = export_structural_verilog(nl);
  CHECK(v.text.find("buf") != std::string::npos);
  CHECK(v.text.find("a_out") != std::string::npos);
}

TEST_CASE("two-input normalization preserves function") {
  // a wide OR like a DMMR minority stage
  Netlist nl;
  nl.name = "wide";
  nl.inputs = {"a", "b", "c", "d", "e"};
  nl.outputs = {"y"};
  nl.gates = {{"g0", GateKind::Or, {"a", "b", "c", "d", "e"}, "y"}};
  Netlist norm = normalize_two_input(nl);
  CHECK(validate(norm).ok());
  for (const auto& g : norm.gates) CHECK(g.ins.size() <= 2);
  CHECK(truth_table(nl).rows == truth_table(norm).rows);

  // inverting and parity kinds keep their semantics
  for (GateKind kind : {GateKind::Nand, GateKind::Nor, GateKind::Xor,
                        GateKind::Xnor, GateKind::And}) {
    Netlist wk;
    wk.name = "wk";
    wk.inputs = {"a", "b", "c", "d", "e", "f", "g"};
    wk.outputs = {"y"};
    wk.gates = {{"g0", kind, {"a", "b", "c", "d", "e", "f", "g"}, "y"}};
    Netlist wn = normalize_two_input(wk);
    CHECK(validate(wn).ok());
    for (const auto& g : wn.gates) CHECK(g.ins.size() <= 2);
    CHECK(truth_table(wk).rows == truth_table(wn).rows);
  }

  // gate depth of the 7-wide tree is logarithmic
  Netlist wk;
  wk.name = "depth";
  wk.inputs = {"a", "b", "c", "d", "e", "f", "g", "h"};
  wk.outputs = {"y"};
  wk.gates = {{"g0", GateKind::And,
               {"a", "b", "c", "d", "e", "f", "g", "h"}, "y"}};
  CHECK(normalize_two_input(wk).gates.size() == 7);
}
