#include "redundis/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstddef>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace redundis {

namespace {

constexpr std::string_view kKindNames[] = {"AND", "OR",   "NAND", "NOR",
                                           "XOR", "XNOR", "NOT",  "BUF"};

}  // namespace

std::string_view to_string(GateKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

std::optional<GateKind> gate_kind_from_string(std::string_view name) {
  for (int i = 0; i < 8; ++i) {
    if (kKindNames[i] == name) return static_cast<GateKind>(i);
  }
  return std::nullopt;
}

FanInRange fan_in_range(GateKind kind) {
  if (kind == GateKind::Not || kind == GateKind::Buf) return {1, 1};
  return {2, INT_MAX};
}

namespace {

// net -> driving gate index, or -1 for primary inputs
using DriverMap = std::unordered_map<std::string, int>;

DriverMap driver_map(const Netlist& nl) {
  DriverMap drivers;
  for (const auto& in : nl.inputs) drivers.emplace(in, -1);
  for (size_t g = 0; g < nl.gates.size(); ++g) {
    drivers.emplace(nl.gates[g].out, static_cast<int>(g));  // first wins
  }
  return drivers;
}

// Kahn's algorithm over the gate graph. Returns gate indices in dependency
// order; leaves cyclic gates out.
std::vector<int> kahn_order(const Netlist& nl, const DriverMap& drivers) {
  const size_t n = nl.gates.size();
  std::vector<int> pending(n, 0);
  std::vector<std::vector<int>> readers(n);
  for (size_t g = 0; g < n; ++g) {
    for (const auto& in : nl.gates[g].ins) {
      auto it = drivers.find(in);
      if (it != drivers.end() && it->second >= 0) {
        ++pending[g];
        readers[it->second].push_back(static_cast<int>(g));
      }
    }
  }
  std::deque<int> ready;
  for (size_t g = 0; g < n; ++g) {
    if (pending[g] == 0) ready.push_back(static_cast<int>(g));
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int g = ready.front();
    ready.pop_front();
    order.push_back(g);
    for (int r : readers[g]) {
      if (--pending[r] == 0) ready.push_back(r);
    }
  }
  return order;
}

// Walks driver edges from a gate known to sit on a cycle until one repeats.
std::vector<std::string> find_cycle(const Netlist& nl, const DriverMap& drivers,
                                    const std::vector<char>& on_cycle) {
  int start = -1;
  for (size_t g = 0; g < nl.gates.size(); ++g) {
    if (on_cycle[g]) {
      start = static_cast<int>(g);
      break;
    }
  }
  std::vector<std::string> path;
  if (start < 0) return path;
  std::unordered_map<int, size_t> seen;
  int cur = start;
  while (seen.find(cur) == seen.end()) {
    seen[cur] = path.size();
    path.push_back(nl.gates[cur].id);
    int next = -1;
    for (const auto& in : nl.gates[cur].ins) {
      auto it = drivers.find(in);
      if (it != drivers.end() && it->second >= 0 && on_cycle[it->second]) {
        next = it->second;
        break;
      }
    }
    if (next < 0) break;
    cur = next;
  }
  // trim the lead-in so the path starts where the loop closes
  auto it = seen.find(cur);
  if (it != seen.end() && it->second > 0) {
    path.erase(path.begin(), path.begin() + static_cast<long>(it->second));
  }
  return path;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

ValidationReport validate(const Netlist& nl) {
  ValidationReport report;
  auto add = [&report](std::string code, std::string msg) {
    report.issues.push_back({std::move(code), std::move(msg)});
  };

  std::unordered_set<std::string> gate_ids;
  for (const auto& g : nl.gates) {
    if (g.id.empty()) add("bad-identifier", "gate with empty id");
    if (!gate_ids.insert(g.id).second) {
      add("duplicate-gate-id", "gate id '" + g.id + "' used more than once");
    }
    auto range = fan_in_range(g.kind);
    int fanin = static_cast<int>(g.ins.size());
    if (fanin < range.min || fanin > range.max) {
      add("bad-fan-in", "gate '" + g.id + "' (" +
                            std::string(to_string(g.kind)) + ") has fan-in " +
                            std::to_string(fanin));
    }
  }

  // drivers: primary inputs and gate outputs
  std::unordered_map<std::string, std::vector<std::string>> drivers_of;
  std::unordered_set<std::string> seen_inputs;
  for (const auto& in : nl.inputs) {
    if (!seen_inputs.insert(in).second) {
      add("duplicate-input", "primary input '" + in + "' listed twice");
    }
    drivers_of[in].push_back("<primary input>");
  }
  for (const auto& g : nl.gates) {
    if (g.out.empty()) {
      add("bad-identifier", "gate '" + g.id + "' has empty output net");
      continue;
    }
    drivers_of[g.out].push_back(g.id);
  }
  for (const auto& [net, ds] : drivers_of) {
    if (ds.size() > 1) {
      add("multiple-drivers",
          "net '" + net + "' has multiple drivers: " + join(ds, ", "));
    }
  }

  auto check_driven = [&](const std::string& net, const std::string& where) {
    if (drivers_of.find(net) == drivers_of.end()) {
      add("undriven-net", "net '" + net + "' referenced by " + where +
                              " has no driver");
    }
  };
  for (const auto& g : nl.gates) {
    for (const auto& in : g.ins) check_driven(in, "gate '" + g.id + "'");
  }
  for (const auto& out : nl.outputs) check_driven(out, "primary output list");

  // cycle check on the gate graph
  DriverMap dm = driver_map(nl);
  std::vector<int> order = kahn_order(nl, dm);
  if (order.size() != nl.gates.size()) {
    std::vector<char> on_cycle(nl.gates.size(), 1);
    for (int g : order) on_cycle[g] = 0;
    std::vector<std::string> cycle = find_cycle(nl, dm, on_cycle);
    add("cycle", "combinational cycle through: " + join(cycle, " -> "));
  }

  return report;
}

std::vector<std::string> topological_order(const Netlist& nl) {
  DriverMap dm = driver_map(nl);
  std::vector<int> order = kahn_order(nl, dm);
  if (order.size() != nl.gates.size()) {
    std::vector<char> on_cycle(nl.gates.size(), 1);
    for (int g : order) on_cycle[g] = 0;
    throw Error("combinational cycle through: " +
                join(find_cycle(nl, dm, on_cycle), " -> "));
  }
  std::vector<std::string> ids;
  ids.reserve(order.size());
  for (int g : order) ids.push_back(nl.gates[g].id);
  return ids;
}

Netlist instantiate(const Netlist& parent, const Netlist& child,
                    const PortBinding& binding, const std::string& prefix) {
  std::unordered_set<std::string> child_ports(child.inputs.begin(),
                                              child.inputs.end());
  std::unordered_set<std::string> child_outputs(child.outputs.begin(),
                                                child.outputs.end());
  child_ports.insert(child.outputs.begin(), child.outputs.end());

  for (const auto& [port, net] : binding) {
    if (child_ports.find(port) == child_ports.end()) {
      throw Error("instantiate: binding names unknown port '" + port +
                  "' of module '" + child.name + "'");
    }
    if (net.empty()) throw Error("instantiate: empty net bound to '" + port + "'");
  }
  for (const auto& port : child.inputs) {
    if (binding.find(port) == binding.end()) {
      throw Error("instantiate: input port '" + port + "' of module '" +
                  child.name + "' is unbound");
    }
  }
  std::unordered_map<std::string, std::string> out_targets;
  for (const auto& port : child.outputs) {
    auto it = binding.find(port);
    if (it == binding.end()) {
      throw Error("instantiate: output port '" + port + "' of module '" +
                  child.name + "' is unbound");
    }
    auto [prev, inserted] = out_targets.emplace(it->second, port);
    if (!inserted) {
      throw Error("instantiate: output ports '" + prev->second + "' and '" +
                  port + "' both bound to net '" + it->second + "'");
    }
  }

  // everything the parent already knows about
  std::unordered_set<std::string> parent_nets(parent.inputs.begin(),
                                              parent.inputs.end());
  parent_nets.insert(parent.outputs.begin(), parent.outputs.end());
  std::unordered_set<std::string> parent_gate_ids;
  std::unordered_set<std::string> parent_driven(parent.inputs.begin(),
                                                parent.inputs.end());
  for (const auto& g : parent.gates) {
    parent_gate_ids.insert(g.id);
    parent_nets.insert(g.out);
    parent_driven.insert(g.out);
    for (const auto& in : g.ins) parent_nets.insert(in);
  }

  for (const auto& port : child.outputs) {
    const std::string& target = binding.at(port);
    if (parent_driven.count(target)) {
      throw Error("instantiate: child output '" + port + "' bound to net '" +
                  target + "' which is already driven in '" + parent.name +
                  "'");
    }
  }

  auto map_net = [&](const std::string& net) -> std::string {
    auto it = binding.find(net);
    if (it != binding.end() && (child_ports.count(net))) return it->second;
    return prefix + net;
  };

  Netlist result = parent;
  for (const auto& g : child.gates) {
    Gate copy;
    copy.id = prefix + g.id;
    if (parent_gate_ids.count(copy.id)) {
      throw Error("instantiate: gate id '" + copy.id +
                  "' collides with an existing gate in '" + parent.name + "'");
    }
    copy.kind = g.kind;
    copy.out = map_net(g.out);
    for (const auto& in : g.ins) copy.ins.push_back(map_net(in));
    // freshly prefixed internal nets must not collide either
    if (!child_outputs.count(g.out) && parent_nets.count(copy.out)) {
      throw Error("instantiate: net '" + copy.out +
                  "' collides with an existing net in '" + parent.name + "'");
    }
    result.gates.push_back(std::move(copy));
  }
  return result;
}

Netlist normalize_two_input(const Netlist& nl) {
  std::unordered_set<std::string> used_nets(nl.inputs.begin(), nl.inputs.end());
  std::unordered_set<std::string> used_ids;
  for (const auto& g : nl.gates) {
    used_nets.insert(g.out);
    used_ids.insert(g.id);
  }

  Netlist result;
  result.name = nl.name;
  result.inputs = nl.inputs;
  result.outputs = nl.outputs;

  auto fresh_net = [&](const std::string& base, int& counter) {
    std::string candidate;
    do {
      candidate = base + "_n2_" + std::to_string(counter++);
    } while (!used_nets.insert(candidate).second);
    return candidate;
  };
  auto fresh_id = [&](const std::string& base, int& counter) {
    std::string candidate;
    do {
      candidate = base + "_n2_" + std::to_string(counter++);
    } while (!used_ids.insert(candidate).second);
    return candidate;
  };

  for (const auto& g : nl.gates) {
    if (g.ins.size() <= 2) {
      result.gates.push_back(g);
      continue;
    }
    GateKind tree_kind = g.kind;
    if (g.kind == GateKind::Nand) tree_kind = GateKind::And;
    if (g.kind == GateKind::Nor) tree_kind = GateKind::Or;
    if (g.kind == GateKind::Xnor) tree_kind = GateKind::Xor;

    int net_counter = 0;
    int id_counter = 0;
    std::vector<std::string> level = g.ins;
    while (level.size() > 2) {
      std::vector<std::string> next;
      for (size_t i = 0; i + 1 < level.size(); i += 2) {
        std::string out = fresh_net(g.out, net_counter);
        result.gates.push_back(
            {fresh_id(g.id, id_counter), tree_kind, {level[i], level[i + 1]}, out});
        next.push_back(out);
      }
      if (level.size() % 2) next.push_back(level.back());
      level = std::move(next);
    }
    result.gates.push_back({g.id, g.kind, {level[0], level[1]}, g.out});
  }
  return result;
}

// --- JSON -------------------------------------------------------------

using json = nlohmann::ordered_json;

std::string to_json(const Netlist& nl) {
  json j;
  j["name"] = nl.name;
  j["inputs"] = nl.inputs;
  j["outputs"] = nl.outputs;
  json gates = json::array();
  for (const auto& g : nl.gates) {
    json jg;
    jg["id"] = g.id;
    jg["kind"] = std::string(to_string(g.kind));
    jg["ins"] = g.ins;
    jg["out"] = g.out;
    gates.push_back(std::move(jg));
  }
  j["gates"] = std::move(gates);
  return j.dump(2) + "\n";
}

namespace {

const json& require_field(const json& obj, const char* key,
                          const std::string& path) {
  if (!obj.is_object()) {
    throw Error("netlist json: " + path + ": expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error("netlist json: " + path + ": missing field '" + key + "'");
  }
  return *it;
}

std::string require_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw Error("netlist json: " + path + ": expected a string");
  return v.get<std::string>();
}

std::vector<std::string> require_string_array(const json& v,
                                              const std::string& path) {
  if (!v.is_array()) throw Error("netlist json: " + path + ": expected an array");
  std::vector<std::string> out;
  for (size_t i = 0; i < v.size(); ++i) {
    out.push_back(require_string(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw Error("netlist json: " + path + ": unexpected field '" + it.key() +
                  "'");
    }
  }
}

}  // namespace

Netlist from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("netlist json: not valid JSON");
  if (!j.is_object()) throw Error("netlist json: $: expected an object");
  reject_unknown_keys(j, {"name", "inputs", "outputs", "gates"}, "$");

  Netlist nl;
  nl.name = require_string(require_field(j, "name", "$"), "$.name");
  nl.inputs = require_string_array(require_field(j, "inputs", "$"), "$.inputs");
  nl.outputs =
      require_string_array(require_field(j, "outputs", "$"), "$.outputs");
  const json& gates = require_field(j, "gates", "$");
  if (!gates.is_array()) throw Error("netlist json: $.gates: expected an array");
  for (size_t i = 0; i < gates.size(); ++i) {
    std::string path = "$.gates[" + std::to_string(i) + "]";
    const json& jg = gates[i];
    if (!jg.is_object()) throw Error("netlist json: " + path + ": expected an object");
    reject_unknown_keys(jg, {"id", "kind", "ins", "out"}, path);
    Gate g;
    g.id = require_string(require_field(jg, "id", path), path + ".id");
    std::string kind =
        require_string(require_field(jg, "kind", path), path + ".kind");
    auto parsed = gate_kind_from_string(kind);
    if (!parsed) {
      throw Error("netlist json: " + path + ".kind: unknown gate kind '" +
                  kind + "'");
    }
    g.kind = *parsed;
    g.ins = require_string_array(require_field(jg, "ins", path), path + ".ins");
    g.out = require_string(require_field(jg, "out", path), path + ".out");
    nl.gates.push_back(std::move(g));
  }
  return nl;
}

// --- structural Verilog ------------------------------------------------

namespace {

const std::set<std::string>& verilog_keywords() {
  static const std::set<std::string> kw = {
      "and",    "assign", "begin",  "buf",    "case",   "end",   "endcase",
      "endmodule", "if",  "inout",  "input",  "module", "nand",  "nor",
      "not",    "or",     "output", "reg",    "wire",   "xnor",  "xor"};
  return kw;
}

bool verilog_ok(const std::string& id) {
  if (id.empty()) return false;
  if (verilog_keywords().count(id)) return false;
  if (!(std::isalpha(static_cast<unsigned char>(id[0])) || id[0] == '_'))
    return false;
  for (char c : id) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'))
      return false;
  }
  return true;
}

const char* primitive_name(GateKind kind) {
  switch (kind) {
    case GateKind::And: return "and";
    case GateKind::Or: return "or";
    case GateKind::Nand: return "nand";
    case GateKind::Nor: return "nor";
    case GateKind::Xor: return "xor";
    case GateKind::Xnor: return "xnor";
    case GateKind::Not: return "not";
    case GateKind::Buf: return "buf";
  }
  return "buf";
}

class Sanitizer {
 public:
  explicit Sanitizer(std::vector<std::pair<std::string, std::string>>& renames)
      : renames_(renames) {}

  std::string map(const std::string& id) {
    auto it = cache_.find(id);
    if (it != cache_.end()) return it->second;
    std::string clean = id;
    if (!verilog_ok(clean)) {
      for (char& c : clean) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
              c == '$'))
          c = '_';
      }
      if (clean.empty() ||
          !(std::isalpha(static_cast<unsigned char>(clean[0])) ||
            clean[0] == '_')) {
        clean = "_" + clean;
      }
      if (verilog_keywords().count(clean)) clean += "_";
    }
    std::string candidate = clean;
    int suffix = 2;
    while (!used_.insert(candidate).second) {
      candidate = clean + "_" + std::to_string(suffix++);
    }
    if (candidate != id) renames_.emplace_back(id, candidate);
    cache_.emplace(id, candidate);
    return candidate;
  }

 private:
  std::unordered_map<std::string, std::string> cache_;
  std::unordered_set<std::string> used_;
  std::vector<std::pair<std::string, std::string>>& renames_;
};

}  // namespace

VerilogExport export_structural_verilog(const Netlist& nl) {
  VerilogExport result;
  // nets and instance names share one module-local namespace in Verilog
  Sanitizer nets(result.renames);
  Sanitizer& ids = nets;

  std::unordered_set<std::string> input_set(nl.inputs.begin(),
                                            nl.inputs.end());
  std::unordered_set<std::string> output_set(nl.outputs.begin(),
                                             nl.outputs.end());

  // an output fed straight from a primary input needs its own port name
  std::vector<std::pair<std::string, std::string>> passthrough;  // (port, src)
  std::vector<std::string> port_order;
  for (const auto& in : nl.inputs) port_order.push_back(nets.map(in));
  std::vector<std::string> output_ports;
  for (const auto& out : nl.outputs) {
    if (input_set.count(out)) {
      std::string port = nets.map(out + "_out");
      result.renames.emplace_back(out, port);
      passthrough.emplace_back(port, nets.map(out));
      output_ports.push_back(port);
    } else {
      output_ports.push_back(nets.map(out));
    }
  }
  port_order.insert(port_order.end(), output_ports.begin(), output_ports.end());

  std::ostringstream os;
  std::string mod_name = nl.name.empty() ? std::string("top") : nl.name;
  Sanitizer mods(result.renames);
  os << "module " << mods.map(mod_name) << " (";
  for (size_t i = 0; i < port_order.size(); ++i) {
    if (i) os << ", ";
    os << port_order[i];
  }
  os << ");\n";
  for (const auto& in : nl.inputs) os << "  input " << nets.map(in) << ";\n";
  for (const auto& port : output_ports) os << "  output " << port << ";\n";

  // wires for internal nets, in order of first definition
  for (const auto& g : nl.gates) {
    if (!input_set.count(g.out) && !output_set.count(g.out)) {
      os << "  wire " << nets.map(g.out) << ";\n";
    }
  }

  for (const auto& g : nl.gates) {
    os << "  " << primitive_name(g.kind) << " " << ids.map("i_" + g.id) << " ("
       << nets.map(g.out);
    for (const auto& in : g.ins) os << ", " << nets.map(in);
    os << ");\n";
  }
  for (const auto& [port, src] : passthrough) {
    os << "  buf " << ids.map("i_buf_" + port) << " (" << port << ", " << src
       << ");\n";
  }
  os << "endmodule\n";
  result.text = os.str();
  return result;
}

}  // namespace redundis
