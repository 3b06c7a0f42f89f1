#include "redundis/simulator.hpp"

#include <algorithm>
#include <unordered_map>

namespace redundis {

std::string_view to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::Stuck0: return "stuck0";
    case FaultKind::Stuck1: return "stuck1";
    case FaultKind::Invert: return "invert";
  }
  return "?";
}

namespace {

inline uint8_t apply_action(uint8_t value, int8_t action) {
  switch (action) {
    case 0: return 0;
    case 1: return 1;
    case 2: return static_cast<uint8_t>(value ^ 1);
    default: return value;
  }
}

inline uint8_t eval_gate(GateKind kind, const uint8_t* values, const int* ins,
                         int count) {
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand: {
      uint8_t v = 1;
      for (int i = 0; i < count; ++i) v &= values[ins[i]];
      return kind == GateKind::And ? v : static_cast<uint8_t>(v ^ 1);
    }
    case GateKind::Or:
    case GateKind::Nor: {
      uint8_t v = 0;
      for (int i = 0; i < count; ++i) v |= values[ins[i]];
      return kind == GateKind::Or ? v : static_cast<uint8_t>(v ^ 1);
    }
    case GateKind::Xor:
    case GateKind::Xnor: {
      uint8_t v = 0;
      for (int i = 0; i < count; ++i) v ^= values[ins[i]];
      return kind == GateKind::Xor ? v : static_cast<uint8_t>(v ^ 1);
    }
    case GateKind::Not:
      return static_cast<uint8_t>(values[ins[0]] ^ 1);
    case GateKind::Buf:
      return values[ins[0]];
  }
  return 0;
}

}  // namespace

CompiledNetlist::CompiledNetlist(const Netlist& nl) {
  ValidationReport report = validate(nl);
  if (!report.ok()) {
    throw Error("cannot compile invalid netlist '" + nl.name +
                "': " + report.issues.front().message);
  }

  auto intern = [this](const std::string& name) {
    auto [it, inserted] =
        net_index_.emplace(name, static_cast<int>(net_names_.size()));
    if (inserted) net_names_.push_back(name);
    return it->second;
  };
  for (const auto& in : nl.inputs) input_nets_.push_back(intern(in));
  std::unordered_map<std::string, size_t> gate_by_id;
  for (size_t i = 0; i < nl.gates.size(); ++i) {
    intern(nl.gates[i].out);
    gate_by_id.emplace(nl.gates[i].id, i);
    for (const auto& in : nl.gates[i].ins) intern(in);
  }
  for (const auto& out : nl.outputs) output_nets_.push_back(intern(out));

  for (const auto& id : topological_order(nl)) {
    const Gate& g = nl.gates[gate_by_id.at(id)];
    CompiledGate cg;
    cg.kind = g.kind;
    cg.out = net_index_.at(g.out);
    cg.ins_begin = static_cast<int>(ins_flat_.size());
    cg.ins_count = static_cast<int>(g.ins.size());
    for (const auto& in : g.ins) ins_flat_.push_back(net_index_.at(in));
    gates_.push_back(cg);
  }
}

int CompiledNetlist::net_index(const std::string& name) const {
  auto it = net_index_.find(name);
  return it == net_index_.end() ? -1 : it->second;
}

CompiledNetlist::Actions CompiledNetlist::actions_for(
    const FaultOverlay& overlay) const {
  Actions actions = no_actions();
  for (const auto& [net, kind] : overlay) {
    int idx = net_index(net);
    if (idx < 0) throw Error("fault overlay names unknown net '" + net + "'");
    actions[idx] = static_cast<int8_t>(kind == FaultKind::Stuck0 ? 0
                                       : kind == FaultKind::Stuck1 ? 1
                                                                   : 2);
  }
  return actions;
}

void CompiledNetlist::evaluate(std::vector<uint8_t>& values) const {
  const int* ins = ins_flat_.data();
  uint8_t* v = values.data();
  for (const CompiledGate& g : gates_) {
    v[g.out] = eval_gate(g.kind, v, ins + g.ins_begin, g.ins_count);
  }
}

void CompiledNetlist::evaluate(std::vector<uint8_t>& values,
                               const Actions& actions) const {
  uint8_t* v = values.data();
  for (int in : input_nets_) v[in] = apply_action(v[in], actions[in]);
  const int* ins = ins_flat_.data();
  for (const CompiledGate& g : gates_) {
    v[g.out] = apply_action(eval_gate(g.kind, v, ins + g.ins_begin, g.ins_count),
                            actions[g.out]);
  }
}

CompiledNetlist::Cone CompiledNetlist::cone_of(
    int target_net, const std::vector<char>& boundary) const {
  // driver gate per net (topo position), -1 for primary inputs
  std::vector<int> driver(net_names_.size(), -1);
  for (size_t i = 0; i < gates_.size(); ++i) {
    driver[gates_[i].out] = static_cast<int>(i);
  }

  Cone cone;
  cone.target_net = target_net;
  std::vector<char> net_seen(net_names_.size(), 0);
  std::vector<char> gate_in_cone(gates_.size(), 0);
  std::vector<int> stack = {target_net};
  net_seen[target_net] = 1;
  std::vector<int> sources;
  while (!stack.empty()) {
    int net = stack.back();
    stack.pop_back();
    if ((boundary.size() > static_cast<size_t>(net) && boundary[net]) ||
        driver[net] < 0) {
      sources.push_back(net);
      continue;
    }
    int g = driver[net];
    gate_in_cone[g] = 1;
    for (int k = 0; k < gates_[g].ins_count; ++k) {
      int in = ins_flat_[gates_[g].ins_begin + k];
      if (!net_seen[in]) {
        net_seen[in] = 1;
        stack.push_back(in);
      }
    }
  }
  for (size_t i = 0; i < gates_.size(); ++i) {
    if (gate_in_cone[i]) cone.gate_order.push_back(static_cast<int>(i));
  }
  std::sort(sources.begin(), sources.end());
  cone.sources = std::move(sources);
  return cone;
}

void CompiledNetlist::evaluate_cone(const Cone& cone,
                                    std::vector<uint8_t>& values) const {
  const int* ins = ins_flat_.data();
  uint8_t* v = values.data();
  for (int gi : cone.gate_order) {
    const CompiledGate& g = gates_[gi];
    v[g.out] = eval_gate(g.kind, v, ins + g.ins_begin, g.ins_count);
  }
}

Assignment evaluate(const Netlist& nl, const Assignment& stimulus,
                    const FaultOverlay& overlay) {
  CompiledNetlist compiled(nl);
  for (const auto& [net, value] : stimulus) {
    (void)value;
    if (std::find(nl.inputs.begin(), nl.inputs.end(), net) == nl.inputs.end()) {
      throw Error("stimulus names '" + net + "' which is not a primary input");
    }
  }
  std::vector<uint8_t> values(compiled.net_count(), 0);
  for (size_t i = 0; i < nl.inputs.size(); ++i) {
    auto it = stimulus.find(nl.inputs[i]);
    if (it == stimulus.end()) {
      throw Error("stimulus is missing primary input '" + nl.inputs[i] + "'");
    }
    values[compiled.input_nets()[i]] = it->second ? 1 : 0;
  }
  if (overlay.empty()) {
    compiled.evaluate(values);
  } else {
    compiled.evaluate(values, compiled.actions_for(overlay));
  }
  Assignment response;
  for (size_t j = 0; j < nl.outputs.size(); ++j) {
    response[nl.outputs[j]] = values[compiled.output_nets()[j]] != 0;
  }
  return response;
}

TruthTable truth_table(const Netlist& nl, const FaultOverlay& overlay) {
  const size_t p = nl.inputs.size();
  if (p > 20) {
    throw Error("truth_table: netlist has " + std::to_string(p) +
                " inputs, above the 20-input enumeration guard; "
                "use sampled evaluate() calls instead");
  }
  if (nl.outputs.size() > 64) {
    throw Error("truth_table: more than 64 outputs cannot be packed");
  }
  CompiledNetlist compiled(nl);
  const bool faulty = !overlay.empty();
  CompiledNetlist::Actions actions =
      faulty ? compiled.actions_for(overlay) : CompiledNetlist::Actions{};

  TruthTable table;
  table.input_names = nl.inputs;
  table.output_names = nl.outputs;
  const size_t q = nl.outputs.size();
  const uint64_t row_count = uint64_t{1} << p;
  table.rows.resize(row_count);
  std::vector<uint8_t> values(compiled.net_count(), 0);
  for (uint64_t v = 0; v < row_count; ++v) {
    for (size_t i = 0; i < p; ++i) {
      values[compiled.input_nets()[i]] =
          static_cast<uint8_t>((v >> (p - 1 - i)) & 1);
    }
    if (faulty) {
      compiled.evaluate(values, actions);
    } else {
      compiled.evaluate(values);
    }
    uint64_t word = 0;
    for (size_t j = 0; j < q; ++j) {
      word |= static_cast<uint64_t>(values[compiled.output_nets()[j]])
              << (q - 1 - j);
    }
    table.rows[v] = word;
  }
  return table;
}

}  // namespace redundis
