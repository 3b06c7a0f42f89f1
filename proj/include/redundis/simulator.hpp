#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "redundis/netlist.hpp"

namespace redundis {

// Net name -> bit value. A stimulus covers exactly the primary inputs,
// a response exactly the primary outputs.
using Assignment = std::map<std::string, bool>;

enum class FaultKind { Stuck0, Stuck1, Invert };
std::string_view to_string(FaultKind kind);

// Net name -> forced behavior, applied after the driving value is computed.
using FaultOverlay = std::map<std::string, FaultKind>;

// Two-valued evaluation of a combinational netlist in topological order.
Assignment evaluate(const Netlist& netlist, const Assignment& stimulus,
                    const FaultOverlay& overlay = {});

// Exhaustive table. Row v assigns input i (in netlist order, first input is
// the most significant bit) the bit (v >> (p-1-i)) & 1. The row word packs
// outputs the same way: output 0 is its most significant bit, so a netlist
// whose outputs spell a binary number MSB-first yields that number directly.
struct TruthTable {
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<uint64_t> rows;  // 2^p words

  bool output_bit(size_t row, size_t output) const {
    return (rows[row] >> (output_names.size() - 1 - output)) & 1;
  }
};

// Guarded at 20 inputs / 64 outputs; beyond that use sampled evaluate calls.
TruthTable truth_table(const Netlist& netlist, const FaultOverlay& overlay = {});

// Index-based form of a valid netlist for repeated evaluation. Construction
// validates and topologically sorts once; evaluation is a linear pass.
class CompiledNetlist {
 public:
  explicit CompiledNetlist(const Netlist& netlist);

  int net_count() const { return static_cast<int>(net_names_.size()); }
  int net_index(const std::string& name) const;  // -1 when absent
  const std::string& net_name(int index) const { return net_names_[index]; }
  const std::vector<int>& input_nets() const { return input_nets_; }
  const std::vector<int>& output_nets() const { return output_nets_; }

  // Per-net fault action, indexed by net: -1 none, 0/1 stuck, 2 invert.
  using Actions = std::vector<int8_t>;
  Actions no_actions() const { return Actions(net_names_.size(), -1); }
  Actions actions_for(const FaultOverlay& overlay) const;

  // `values` must be net_count() long with input net slots already set.
  void evaluate(std::vector<uint8_t>& values) const;
  void evaluate(std::vector<uint8_t>& values, const Actions& actions) const;

  // Sub-circuit feeding one net. Sources are the nets read by the cone but
  // not computed inside it (boundary nets, primary inputs), in ascending
  // net-index order.
  struct Cone {
    int target_net = -1;
    std::vector<int> gate_order;  // indices into the compiled gate list
    std::vector<int> sources;
  };
  // `boundary` (size net_count) marks nets whose drivers must not be entered.
  Cone cone_of(int target_net, const std::vector<char>& boundary) const;
  // Evaluates only the cone's gates; source slots of `values` must be set.
  void evaluate_cone(const Cone& cone, std::vector<uint8_t>& values) const;

  struct CompiledGate {
    GateKind kind;
    int out;
    int ins_begin;
    int ins_count;
  };
  const std::vector<CompiledGate>& gates() const { return gates_; }
  const std::vector<int>& gate_inputs() const { return ins_flat_; }

 private:
  std::vector<std::string> net_names_;
  std::map<std::string, int> net_index_;
  std::vector<int> input_nets_;
  std::vector<int> output_nets_;
  std::vector<CompiledGate> gates_;  // topological order
  std::vector<int> ins_flat_;
};

}  // namespace redundis
