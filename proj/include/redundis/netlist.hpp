#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace redundis {

// Generic failure type for parameter misuse, malformed files and the like.
// Structural problems found by validate() are reported, not thrown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GateKind { And, Or, Nand, Nor, Xor, Xnor, Not, Buf };

// Multi-input semantics: And/Or/Nand/Nor fold over all inputs; Xor is odd
// parity, Xnor even parity. Not/Buf are strictly unary.
std::string_view to_string(GateKind kind);
std::optional<GateKind> gate_kind_from_string(std::string_view name);

struct FanInRange {
  int min;
  int max;  // unbounded kinds use INT_MAX
};
FanInRange fan_in_range(GateKind kind);

struct Gate {
  std::string id;
  GateKind kind = GateKind::And;
  std::vector<std::string> ins;
  std::string out;

  bool operator==(const Gate&) const = default;
};

// Flattened combinational netlist. Nets are named by strings; a net exists
// iff it is a primary input or some gate's output.
struct Netlist {
  std::string name;
  std::vector<std::string> inputs;   // ordered primary inputs
  std::vector<std::string> outputs;  // ordered primary outputs
  std::vector<Gate> gates;

  bool operator==(const Netlist&) const = default;
};

struct Issue {
  std::string code;  // "multiple-drivers", "cycle", "undriven-net", ...
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks all structural invariants: fan-in ranges, unique gate ids, single
// driver per net, every referenced net driven, outputs driven, acyclicity.
ValidationReport validate(const Netlist& netlist);

// Gate ids in dependency order (drivers before readers). Throws Error on a
// combinational cycle, naming its members.
std::vector<std::string> topological_order(const Netlist& netlist);

// Child module port name -> parent net name. Must be total over the child's
// inputs and outputs; injective on outputs.
using PortBinding = std::map<std::string, std::string>;

// Flattens `child` into `parent`: child gates and internal nets get `prefix`
// prepended, port nets are merged with parent nets per `binding`. Throws on
// name collisions, unbound ports, and double-driven merged nets.
Netlist instantiate(const Netlist& parent, const Netlist& child,
                    const PortBinding& binding, const std::string& prefix);

// Decomposes every gate with fan-in > 2 into a balanced tree of 2-input
// gates (inverting kinds keep the inversion at the tree root). Function is
// preserved; gate and net counts grow.
Netlist normalize_two_input(const Netlist& netlist);

// JSON schema: {"name": str, "inputs": [str], "outputs": [str],
//               "gates": [{"id": str, "kind": str, "ins": [str], "out": str}]}
// Emission uses that key order. from_json reports schema violations with a
// path to the offending field.
std::string to_json(const Netlist& netlist);
Netlist from_json(const std::string& text);

struct VerilogExport {
  std::string text;
  // identifiers that had to be sanitized, as (original, emitted) pairs
  std::vector<std::pair<std::string, std::string>> renames;
};

// Structural Verilog subset: module header, wire declarations, one primitive
// instantiation per gate. Deterministic for identical input.
VerilogExport export_structural_verilog(const Netlist& netlist);

}  // namespace redundis
