#pragma once

#include <optional>
#include <string>
#include <vector>

#include "redundis/modules.hpp"
#include "redundis/netlist.hpp"

namespace redundis {

// NMR{n}: n replicas into one n-way majority voter per output bit.
// DMMR{m}: m replicas, replicas 1-3 majority-voted, replicas 4..m OR-ed,
// system output = majority AND minority (3-of-m, one voter per output bit).
struct RedundancyScheme {
  enum class Kind { Nmr, Dmmr };
  Kind kind = Kind::Nmr;
  int size = 3;  // n for NMR, m for DMMR

  static RedundancyScheme nmr(int n);
  static RedundancyScheme dmmr(int m);

  int replica_count() const { return size; }
  bool is_dmmr() const { return kind == Kind::Dmmr; }

  // grammar: "nmr:<odd n>" | "dmmr:3of<m>"
  std::string to_string() const;
  static RedundancyScheme parse(const std::string& text);

  bool operator==(const RedundancyScheme&) const = default;
};

struct ToleranceDescriptor {
  // faults masked regardless of where they land
  int total_guaranteed = 0;
  // faults masked provided they respect the per-group budgets (equals
  // total_guaranteed for NMR)
  int conditional_total = 0;
  // DMMR group budgets; zero for NMR
  int majority_budget = 0;
  int minority_budget = 0;
};

ToleranceDescriptor tolerance(const RedundancyScheme& scheme);

struct RedundantSystem {
  Netlist netlist;  // flattened system
  RedundancyScheme scheme;
  // per replica (index 0 = replica 1), that replica's output nets in the
  // golden module's output order
  std::vector<std::vector<std::string>> module_output_nets;
  Netlist golden_module;
  VoterConstruction voter_construction = VoterConstruction::SumOfProducts;
};

// n odd in [3, 9]. Replicas share the primary inputs; per output bit one
// majority_voter(n) over the replicas' copies of that bit.
RedundantSystem build_nmr(const Netlist& module, int n,
                          std::optional<VoterConstruction> voter = {});

// m in [5, 9]. Same sharing; per output bit one dmmr_voter(m).
RedundantSystem build_dmmr(const Netlist& module, int m);

}  // namespace redundis
