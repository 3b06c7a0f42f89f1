#include <doctest.h>

#include "redundis/modules.hpp"
#include "redundis/netlist.hpp"
#include "redundis/simulator.hpp"
#include "test_util.hpp"

using namespace redundis;

TEST_CASE("majority voter evaluation") {
  Netlist maj = majority_voter(3, VoterConstruction::SumOfProducts);
  CHECK(evaluate(maj, {{"f1", 1}, {"f2", 1}, {"f3", 0}}).at("y") == true);
  CHECK(evaluate(maj, {{"f1", 0}, {"f2", 0}, {"f3", 0}}).at("y") == false);
}

TEST_CASE("stimulus must cover exactly the inputs") {
  Netlist maj = majority_voter(3, VoterConstruction::SumOfProducts);
  CHECK_THROWS_WITH_AS(evaluate(maj, {{"f1", 1}, {"f2", 1}}),
                       doctest::Contains("f3"), Error);
  CHECK_THROWS_WITH_AS(
      evaluate(maj, {{"f1", 1}, {"f2", 1}, {"f3", 0}, {"zz", 0}}),
      doctest::Contains("zz"), Error);
}

TEST_CASE("invert overlay on the output complements it") {
  Netlist maj = majority_voter(3, VoterConstruction::SumOfProducts);
  for (int v = 0; v < 8; ++v) {
    Assignment stim = {{"f1", ((v >> 2) & 1) != 0},
                       {"f2", ((v >> 1) & 1) != 0},
                       {"f3", (v & 1) != 0}};
    bool clean = evaluate(maj, stim).at("y");
    bool flipped = evaluate(maj, stim, {{"y", FaultKind::Invert}}).at("y");
    CHECK(flipped == !clean);
  }
}

TEST_CASE("overlay kinds force or flip") {
  Netlist nl;
  nl.name = "buf";
  nl.inputs = {"a"};
  nl.outputs = {"y"};
  nl.gates = {{"g0", GateKind::Buf, {"a"}, "y"}};
  CHECK(evaluate(nl, {{"a", 1}}, {{"y", FaultKind::Stuck0}}).at("y") == false);
  CHECK(evaluate(nl, {{"a", 0}}, {{"y", FaultKind::Stuck1}}).at("y") == true);
  // overlays on primary inputs apply before any gate reads them
  CHECK(evaluate(nl, {{"a", 0}}, {{"a", FaultKind::Invert}}).at("y") == true);
  CHECK_THROWS_WITH_AS(evaluate(nl, {{"a", 1}}, {{"nope", FaultKind::Stuck0}}),
                       doctest::Contains("nope"), Error);
}

TEST_CASE("truth table of a 2-input AND") {
  Netlist nl;
  nl.name = "and1";
  nl.inputs = {"a", "b"};
  nl.outputs = {"y"};
  nl.gates = {{"g0", GateKind::And, {"a", "b"}, "y"}};
  TruthTable t = truth_table(nl);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows == std::vector<uint64_t>{0, 0, 0, 1});
}

TEST_CASE("truth table of the majority voter matches the threshold oracle") {
  for (VoterConstruction c :
       {VoterConstruction::SumOfProducts, VoterConstruction::CountCompare}) {
    TruthTable t = truth_table(majority_voter(3, c));
    REQUIRE(t.rows.size() == 8);
    for (uint64_t v = 0; v < 8; ++v) {
      CHECK(t.rows[v] == (testutil::popcount_bits(v, 3) >= 2 ? 1u : 0u));
    }
  }
}

TEST_CASE("truth table of the 4x4 multiplier matches integer products") {
  TruthTable t = truth_table(braun_multiplier(4));
  REQUIRE(t.rows.size() == 256);
  for (uint64_t v = 0; v < 256; ++v) {
    uint64_t a = v >> 4, b = v & 0xF;
    CHECK(t.rows[v] == a * b);
  }
}

TEST_CASE("truth table guard rejects wide netlists") {
  Netlist nl;
  nl.name = "wide";
  std::vector<std::string> ins;
  for (int i = 0; i < 21; ++i) {
    nl.inputs.push_back("i" + std::to_string(i));
    ins.push_back(nl.inputs.back());
  }
  nl.outputs = {"y"};
  nl.gates = {{"g0", GateKind::Or, ins, "y"}};
  CHECK_THROWS_WITH_AS(truth_table(nl), doctest::Contains("20"), Error);
}

TEST_CASE("evaluation is deterministic and empty overlay is the identity") {
  Netlist nl = testutil::random_netlist(7, 5, 30, 4);
  REQUIRE(validate(nl).ok());
  for (uint64_t v = 0; v < 32; ++v) {
    Assignment stim;
    for (size_t i = 0; i < nl.inputs.size(); ++i) {
      stim[nl.inputs[i]] = (v >> (nl.inputs.size() - 1 - i)) & 1;
    }
    Assignment r1 = evaluate(nl, stim);
    Assignment r2 = evaluate(nl, stim);
    Assignment r3 = evaluate(nl, stim, {});
    CHECK(r1 == r2);
    CHECK(r1 == r3);
  }
}

TEST_CASE("an overlay only disturbs the fan-out cone of its net") {
  for (uint64_t seed = 100; seed < 112; ++seed) {
    Netlist nl = testutil::random_netlist(seed, 5, 25, 6);
    REQUIRE(validate(nl).ok());
    const std::string target = nl.gates[seed % nl.gates.size()].out;
    std::set<std::string> cone = testutil::fanout_cone(nl, target);
    for (uint64_t v = 0; v < 32; ++v) {
      Assignment stim;
      for (size_t i = 0; i < nl.inputs.size(); ++i) {
        stim[nl.inputs[i]] = (v >> (nl.inputs.size() - 1 - i)) & 1;
      }
      Assignment clean = evaluate(nl, stim);
      Assignment faulty = evaluate(nl, stim, {{target, FaultKind::Invert}});
      for (const auto& out : nl.outputs) {
        if (!cone.count(out)) CHECK(clean.at(out) == faulty.at(out));
      }
    }
  }
}
