#pragma once

#include <map>
#include <string>
#include <vector>

#include "redundis/netlist.hpp"
#include "redundis/redundancy.hpp"

namespace redundis {

// Abstract technology-neutral delay units; nanoseconds from real synthesis
// flows are not modeled. Gate delay = base(kind) + fan_in_scale * (fanin-2)
// for fanin above 2. Interconnect delay is not modeled.
struct DelayModel {
  std::string name = "unit";
  std::map<GateKind, double> base;  // kinds absent here use default_delay
  double default_delay = 1.0;
  double fan_in_scale = 0.0;

  static DelayModel unit() { return {}; }
  double gate_delay(GateKind kind, int fanin) const;
};

struct AreaWeights {
  std::map<GateKind, double> weight;  // default 1 per gate
  double default_weight = 1.0;
};

struct AreaResult {
  long long gate_count = 0;
  double weighted_area = 0.0;
};
AreaResult area(const Netlist& netlist, const AreaWeights& weights = {});

struct CriticalPath {
  double delay = 0.0;
  std::vector<std::string> gate_path;  // input side first
};
CriticalPath critical_path_delay(const Netlist& netlist,
                                 const DelayModel& model = DelayModel::unit());

enum class Normalization { WideGates, TwoInput };
std::string_view to_string(Normalization n);

struct MetricsReport {
  std::string circuit;
  long long gate_count = 0;
  double weighted_area = 0.0;
  double critical_path = 0.0;
  double adp = 0.0;  // weighted_area * critical_path, exactly
  std::string voter_construction = "n/a";
  Normalization normalization = Normalization::WideGates;
  // like-for-like comparison metadata
  std::string module_name;
  std::string scheme;  // empty for a bare module
  int replica_count = 1;
  std::string delay_model;

  std::string to_json() const;
};

// Measures the netlist as given; `normalization` records which form it is in.
MetricsReport make_report(const Netlist& netlist, const DelayModel& model,
                          const AreaWeights& weights,
                          Normalization normalization);

// Normalizes to 2-input gates first when requested, then measures.
MetricsReport system_report(const RedundantSystem& system,
                            const DelayModel& model = DelayModel::unit(),
                            Normalization normalization = Normalization::TwoInput,
                            const AreaWeights& weights = {});

struct ComparisonRow {
  std::string baseline;
  std::string candidate;
  double adp_reduction_percent = 0.0;
  double area_reduction_percent = 0.0;
  int module_count_delta = 0;

  std::string to_json() const;
};

// Requires matching module, delay model and normalization.
ComparisonRow compare(const MetricsReport& baseline,
                      const MetricsReport& candidate);

std::string render_table(const std::vector<MetricsReport>& reports);
std::string render_table(const ComparisonRow& row);

}  // namespace redundis
