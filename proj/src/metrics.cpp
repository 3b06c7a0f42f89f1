#include "redundis/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace redundis {

double DelayModel::gate_delay(GateKind kind, int fanin) const {
  auto it = base.find(kind);
  double d = it == base.end() ? default_delay : it->second;
  if (d < 0) throw Error("delay model has a negative delay");
  if (fanin > 2) d += fan_in_scale * (fanin - 2);
  return d;
}

std::string_view to_string(Normalization n) {
  return n == Normalization::WideGates ? "wide-gates" : "two-input";
}

AreaResult area(const Netlist& nl, const AreaWeights& weights) {
  for (const auto& [kind, w] : weights.weight) {
    (void)kind;
    if (w < 0) throw Error("area weights must be nonnegative");
  }
  if (weights.default_weight < 0) {
    throw Error("area weights must be nonnegative");
  }
  AreaResult result;
  result.gate_count = static_cast<long long>(nl.gates.size());
  for (const auto& g : nl.gates) {
    auto it = weights.weight.find(g.kind);
    result.weighted_area +=
        it == weights.weight.end() ? weights.default_weight : it->second;
  }
  return result;
}

CriticalPath critical_path_delay(const Netlist& nl, const DelayModel& model) {
  // single topological pass; arrival(net) = longest weighted path to it
  std::vector<std::string> order = topological_order(nl);  // throws on cycle
  std::unordered_map<std::string, size_t> gate_by_id;
  for (size_t i = 0; i < nl.gates.size(); ++i) gate_by_id[nl.gates[i].id] = i;

  std::unordered_map<std::string, double> arrival;
  std::unordered_map<std::string, std::string> via;  // net -> driving gate id
  for (const auto& in : nl.inputs) arrival[in] = 0.0;

  for (const auto& id : order) {
    const Gate& g = nl.gates[gate_by_id.at(id)];
    double worst = 0.0;
    for (const auto& in : g.ins) {
      auto it = arrival.find(in);
      double t = it == arrival.end() ? 0.0 : it->second;
      worst = std::max(worst, t);
    }
    arrival[g.out] = worst + model.gate_delay(g.kind, static_cast<int>(g.ins.size()));
    via[g.out] = g.id;
  }

  CriticalPath cp;
  std::string worst_net;
  for (const auto& out : nl.outputs) {
    auto it = arrival.find(out);
    double t = it == arrival.end() ? 0.0 : it->second;
    if (t > cp.delay) {
      cp.delay = t;
      worst_net = out;
    }
  }
  // walk the witness path back through worst-arrival fan-ins
  std::string net = worst_net;
  while (!net.empty() && via.count(net)) {
    const Gate& g = nl.gates[gate_by_id.at(via[net])];
    cp.gate_path.push_back(g.id);
    std::string best;
    double best_t = -1.0;
    for (const auto& in : g.ins) {
      auto it = arrival.find(in);
      double t = it == arrival.end() ? 0.0 : it->second;
      if (t > best_t) {
        best_t = t;
        best = in;
      }
    }
    net = best;
  }
  std::reverse(cp.gate_path.begin(), cp.gate_path.end());
  return cp;
}

MetricsReport make_report(const Netlist& nl, const DelayModel& model,
                          const AreaWeights& weights,
                          Normalization normalization) {
  MetricsReport report;
  report.circuit = nl.name;
  AreaResult a = area(nl, weights);
  report.gate_count = a.gate_count;
  report.weighted_area = a.weighted_area;
  report.critical_path = critical_path_delay(nl, model).delay;
  report.adp = report.weighted_area * report.critical_path;
  report.normalization = normalization;
  report.module_name = nl.name;
  report.delay_model = model.name;
  return report;
}

MetricsReport system_report(const RedundantSystem& system,
                            const DelayModel& model,
                            Normalization normalization,
                            const AreaWeights& weights) {
  const Netlist* measured = &system.netlist;
  Netlist normalized;
  if (normalization == Normalization::TwoInput) {
    normalized = normalize_two_input(system.netlist);
    measured = &normalized;
  }
  MetricsReport report = make_report(*measured, model, weights, normalization);
  report.voter_construction = std::string(to_string(system.voter_construction));
  report.module_name = system.golden_module.name;
  report.scheme = system.scheme.to_string();
  report.replica_count = system.scheme.replica_count();
  return report;
}

ComparisonRow compare(const MetricsReport& baseline,
                      const MetricsReport& candidate) {
  if (baseline.module_name != candidate.module_name) {
    throw Error("compare: reports measure different modules ('" +
                baseline.module_name + "' vs '" + candidate.module_name + "')");
  }
  if (baseline.delay_model != candidate.delay_model) {
    throw Error("compare: reports use different delay models ('" +
                baseline.delay_model + "' vs '" + candidate.delay_model + "')");
  }
  if (baseline.normalization != candidate.normalization) {
    throw Error("compare: reports use different normalizations");
  }
  if (baseline.adp == 0.0 || baseline.weighted_area == 0.0) {
    throw Error("compare: baseline has zero area or ADP");
  }
  ComparisonRow row;
  row.baseline = baseline.scheme.empty() ? baseline.circuit : baseline.scheme;
  row.candidate = candidate.scheme.empty() ? candidate.circuit : candidate.scheme;
  row.adp_reduction_percent =
      (baseline.adp - candidate.adp) / baseline.adp * 100.0;
  row.area_reduction_percent =
      (baseline.weighted_area - candidate.weighted_area) /
      baseline.weighted_area * 100.0;
  row.module_count_delta = baseline.replica_count - candidate.replica_count;
  return row;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["circuit"] = circuit;
  j["gate_count"] = gate_count;
  j["weighted_area"] = weighted_area;
  j["critical_path_delay"] = critical_path;
  j["adp"] = adp;
  j["voter_construction"] = voter_construction;
  j["normalization"] = std::string(redundis::to_string(normalization));
  j["module"] = module_name;
  if (!scheme.empty()) j["scheme"] = scheme;
  j["replica_count"] = replica_count;
  j["delay_model"] = delay_model;
  j["note"] = "interconnect delay not modeled";
  return j.dump(2);
}

std::string ComparisonRow::to_json() const {
  nlohmann::ordered_json j;
  j["baseline"] = baseline;
  j["candidate"] = candidate;
  j["adp_reduction_percent"] = adp_reduction_percent;
  j["area_reduction_percent"] = area_reduction_percent;
  j["module_count_delta"] = module_count_delta;
  j["note"] = "interconnect delay not modeled";
  return j.dump(2);
}

std::string render_table(const std::vector<MetricsReport>& reports) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"circuit", "gates", "area", "delay", "adp", "voter", "norm",
                   "model"});
  for (const auto& r : reports) {
    cells.push_back({r.circuit, std::to_string(r.gate_count),
                     fmt(r.weighted_area), fmt(r.critical_path), fmt(r.adp),
                     r.voter_construction,
                     std::string(to_string(r.normalization)), r.delay_model});
  }
  std::vector<size_t> widths(cells[0].size(), 0);
  for (const auto& row : cells) {
    for (size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream os;
  os << "# delay in abstract model units; interconnect delay not modeled\n";
  for (const auto& row : cells) {
    for (size_t c = 0; c < row.size(); ++c) {
      os << std::left << std::setw(static_cast<int>(widths[c]) + 2) << row[c];
    }
    os << "\n";
  }
  return os.str();
}

std::string render_table(const ComparisonRow& row) {
  std::ostringstream os;
  os << "# interconnect delay not modeled\n";
  os << "baseline:            " << row.baseline << "\n";
  os << "candidate:           " << row.candidate << "\n";
  os << "adp reduction:       " << fmt(row.adp_reduction_percent) << " %\n";
  os << "area reduction:      " << fmt(row.area_reduction_percent) << " %\n";
  os << "module count delta:  " << row.module_count_delta << "\n";
  return os.str();
}

}  // namespace redundis
