#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "redundis/netlist.hpp"

namespace testutil {

// Small random combinational DAG, reproducible from the seed. Every gate
// reads already-driven nets, so the result always validates.
inline redundis::Netlist random_netlist(uint64_t seed, int num_inputs,
                                        int num_gates, int num_outputs) {
  std::mt19937_64 rng(seed);
  redundis::Netlist nl;
  nl.name = "rand" + std::to_string(seed);
  std::vector<std::string> nets;
  for (int i = 0; i < num_inputs; ++i) {
    nl.inputs.push_back("i" + std::to_string(i));
    nets.push_back(nl.inputs.back());
  }
  auto pick_net = [&]() { return nets[rng() % nets.size()]; };
  for (int g = 0; g < num_gates; ++g) {
    redundis::Gate gate;
    gate.id = "g" + std::to_string(g);
    gate.out = "n" + std::to_string(g);
    int kind = static_cast<int>(rng() % 8);
    gate.kind = static_cast<redundis::GateKind>(kind);
    int fanin = 1;
    if (gate.kind != redundis::GateKind::Not &&
        gate.kind != redundis::GateKind::Buf) {
      fanin = 2 + static_cast<int>(rng() % 3);
    }
    for (int i = 0; i < fanin; ++i) gate.ins.push_back(pick_net());
    nets.push_back(gate.out);
    nl.gates.push_back(std::move(gate));
  }
  std::set<std::string> chosen;
  while (static_cast<int>(chosen.size()) < num_outputs) {
    chosen.insert(pick_net());
  }
  nl.outputs.assign(chosen.begin(), chosen.end());
  return nl;
}

// Nets reachable forward from `net` (including itself).
inline std::set<std::string> fanout_cone(const redundis::Netlist& nl,
                                         const std::string& net) {
  std::set<std::string> cone = {net};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& g : nl.gates) {
      if (cone.count(g.out)) continue;
      for (const auto& in : g.ins) {
        if (cone.count(in)) {
          cone.insert(g.out);
          grew = true;
          break;
        }
      }
    }
  }
  return cone;
}

inline int popcount_bits(uint64_t v, int width) {
  int count = 0;
  for (int i = 0; i < width; ++i) count += static_cast<int>((v >> i) & 1);
  return count;
}

}  // namespace testutil
