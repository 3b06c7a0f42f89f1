// redundis — workbench for NMR / 3-of-M DMMR fault-tolerant circuits:
// build them around a function module, verify masking guarantees
// exhaustively, and compare area/delay/ADP and reliability.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "redundis/fault_engine.hpp"
#include "redundis/metrics.hpp"
#include "redundis/modules.hpp"
#include "redundis/netlist.hpp"
#include "redundis/redundancy.hpp"
#include "redundis/reliability.hpp"
#include "redundis/simulator.hpp"
#include "redundis/table1.hpp"

using namespace redundis;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw Error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw Error("cannot write '" + path + "'");
  out << text;
}

Netlist load_module(const std::string& selector) {
  if (selector == "braun4") return braun_multiplier(4);
  if (selector == "fulladder") return full_adder();
  if (selector == "halfadder") return half_adder();
  if (selector.rfind("braun:", 0) == 0) {
    try {
      return braun_multiplier(std::stoi(selector.substr(6)));
    } catch (const std::invalid_argument&) {
      throw Error("bad module selector '" + selector + "'");
    }
  }
  if (selector.find('/') != std::string::npos ||
      selector.find(".json") != std::string::npos) {
    Netlist nl = from_json(read_file(selector));
    ValidationReport report = validate(nl);
    if (!report.ok()) {
      throw Error("module netlist '" + selector +
                  "' is invalid: " + report.issues.front().message);
    }
    return nl;
  }
  throw Error("unknown module '" + selector +
              "'; use braun4, braun:<w>, fulladder, or a netlist JSON path");
}

std::optional<VoterConstruction> parse_voter(const std::string& name) {
  if (name == "auto" || name.empty()) return std::nullopt;
  if (name == "sop") return VoterConstruction::SumOfProducts;
  if (name == "count") return VoterConstruction::CountCompare;
  throw Error("unknown voter construction '" + name + "'");
}

RedundantSystem build_system(const std::string& scheme_str,
                             const Netlist& module,
                             const std::string& voter_name) {
  RedundancyScheme scheme = RedundancyScheme::parse(scheme_str);
  if (scheme.is_dmmr()) return build_dmmr(module, scheme.size);
  return build_nmr(module, scheme.size, parse_voter(voter_name));
}

DelayModel load_delay_model(const std::string& path) {
  if (path.empty()) return DelayModel::unit();
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error("delay model '" + path + "' is not a JSON object");
  }
  DelayModel model;
  model.name = j.value("name", path);
  model.default_delay = j.value("default_delay", 1.0);
  model.fan_in_scale = j.value("fan_in_scale", 0.0);
  if (j.contains("delays")) {
    for (auto it = j["delays"].begin(); it != j["delays"].end(); ++it) {
      auto kind = gate_kind_from_string(it.key());
      if (!kind) throw Error("delay model names unknown gate kind '" +
                             it.key() + "'");
      model.base[*kind] = it.value().get<double>();
    }
  }
  return model;
}

Normalization parse_normalization(const std::string& name) {
  if (name == "two-input") return Normalization::TwoInput;
  if (name == "wide") return Normalization::WideGates;
  throw Error("unknown normalization '" + name + "'");
}

struct RangeSpec {
  double r_min = 0.0, r_max = 1.0;
  int steps = 0;  // 0 = single point at r_min
};

RangeSpec parse_range(const std::string& text) {
  RangeSpec spec;
  size_t c1 = text.find(':');
  try {
    if (c1 == std::string::npos) {
      spec.r_min = std::stod(text);
      return spec;
    }
    size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw Error("bad r range '" + text + "'; use <r> or <min>:<max>:<steps>");
    }
    spec.r_min = std::stod(text.substr(0, c1));
    spec.r_max = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    spec.steps = std::stoi(text.substr(c2 + 1));
  } catch (const std::invalid_argument&) {
    throw Error("bad r range '" + text + "'; use <r> or <min>:<max>:<steps>");
  }
  return spec;
}

int tightness_cardinality(const RedundancyScheme& scheme) {
  if (scheme.is_dmmr()) return 2;  // both-majority pairs are non-conforming
  return (scheme.size + 1) / 2;
}

// --- subcommand bodies -------------------------------------------------

int run_gen(const std::string& scheme, const std::string& module_sel,
            const std::string& voter, const std::string& out) {
  Netlist module = load_module(module_sel);
  RedundantSystem sys = build_system(scheme, module, voter);
  write_output(to_json(sys.netlist), out);
  std::ostream& info = (out.empty() || out == "-") ? std::cerr : std::cout;
  info << "scheme:   " << sys.scheme.to_string() << "\n";
  info << "replicas: " << sys.scheme.replica_count() << "\n";
  info << "gates:    " << sys.netlist.gates.size() << "\n";
  return 0;
}

int run_verify(const std::string& scheme_str, const std::string& module_sel,
               const std::string& netlist_override, const std::string& voter,
               const std::string& format, const std::string& out) {
  Netlist module = load_module(module_sel);
  RedundantSystem sys = build_system(scheme_str, module, voter);
  if (!netlist_override.empty()) {
    Netlist replacement = from_json(read_file(netlist_override));
    if (replacement.inputs != sys.netlist.inputs ||
        replacement.outputs != sys.netlist.outputs) {
      throw Error("override netlist must keep the system's ports");
    }
    sys.netlist = std::move(replacement);
  }

  ToleranceDescriptor tol = tolerance(sys.scheme);
  MaskingVerdict verdict = verify_guarantee(sys);

  int tight_card = tightness_cardinality(sys.scheme);
  std::optional<Counterexample> witness;
  bool witness_replays = false;
  if (verdict.verified) {
    witness = find_counterexample(sys, tight_card);
    if (witness) {
      const size_t p = sys.netlist.inputs.size();
      Assignment stim;
      for (size_t i = 0; i < p; ++i) {
        stim[sys.netlist.inputs[i]] =
            ((witness->input_row >> (p - 1 - i)) & 1) != 0;
      }
      const std::string& net = sys.netlist.outputs[witness->output_bit];
      witness_replays =
          evaluate(sys.netlist, stim, witness->overlay).at(net) !=
          evaluate(sys.golden_module, stim).at(net);
    }
  }

  bool ok = verdict.verified && witness.has_value() && witness_replays;
  std::ostringstream os;
  if (format == "json") {
    nlohmann::ordered_json j;
    j["scheme"] = sys.scheme.to_string();
    j["module"] = sys.golden_module.name;
    j["tolerance"] = {{"total_guaranteed", tol.total_guaranteed},
                      {"conditional_total", tol.conditional_total},
                      {"majority_budget", tol.majority_budget},
                      {"minority_budget", tol.minority_budget}};
    j["guarantee"] = {{"verified", verdict.verified},
                      {"patterns_checked", verdict.patterns_checked},
                      {"inputs_per_pattern", verdict.inputs_per_pattern},
                      {"behavior", "adversarial"}};
    if (verdict.counterexample) {
      j["guarantee"]["counterexample"] =
          nlohmann::ordered_json::parse(verdict.counterexample->to_json());
    }
    j["tightness"] = {{"cardinality", tight_card},
                      {"witness_found", witness.has_value()},
                      {"witness_replays", witness_replays}};
    if (witness) {
      j["tightness"]["witness"] =
          nlohmann::ordered_json::parse(witness->to_json());
    }
    os << j.dump(2) << "\n";
  } else {
    os << "scheme:     " << sys.scheme.to_string() << " over "
       << sys.golden_module.name << "\n";
    os << "tolerance:  conditional " << tol.conditional_total;
    if (sys.scheme.is_dmmr()) {
      os << " (majority budget " << tol.majority_budget << ", minority budget "
         << tol.minority_budget << "); any-distribution "
         << tol.total_guaranteed;
    }
    os << "\n";
    os << "guarantee:  "
       << (verdict.verified ? "VERIFIED" : "VIOLATED") << " over "
       << verdict.patterns_checked << " fault patterns x "
       << verdict.inputs_per_pattern << " inputs (adversarial)\n";
    if (verdict.counterexample) {
      os << "counterexample: " << verdict.counterexample->to_json() << "\n";
    }
    os << "tightness:  cardinality " << tight_card << " -> "
       << (witness ? (witness_replays ? "witness found and replayed"
                                      : "witness found but DID NOT replay")
                   : "NO witness found")
       << "\n";
    if (witness) os << "witness:    " << witness->to_json() << "\n";
  }
  write_output(os.str(), out);
  return ok ? 0 : 1;
}

int run_metrics(const std::string& scheme, const std::string& module_sel,
                const std::string& voter, const std::string& norm,
                const std::string& model_path, const std::string& format,
                const std::string& out) {
  Netlist module = load_module(module_sel);
  DelayModel model = load_delay_model(model_path);
  Normalization normalization = parse_normalization(norm);
  MetricsReport report;
  if (scheme.empty()) {
    const Netlist* measured = &module;
    Netlist normalized;
    if (normalization == Normalization::TwoInput) {
      normalized = normalize_two_input(module);
      measured = &normalized;
    }
    report = make_report(*measured, model, {}, normalization);
    report.module_name = module.name;
  } else {
    report = system_report(build_system(scheme, module, voter), model,
                           normalization);
  }
  if (format == "json") {
    write_output(report.to_json() + "\n", out);
  } else {
    write_output(render_table({report}), out);
  }
  return 0;
}

int run_compare(const std::string& baseline, const std::string& candidate,
                const std::string& module_sel, const std::string& voter,
                const std::string& norm, const std::string& model_path,
                const std::string& format, const std::string& out) {
  Netlist module = load_module(module_sel);
  DelayModel model = load_delay_model(model_path);
  Normalization normalization = parse_normalization(norm);
  MetricsReport base =
      system_report(build_system(baseline, module, voter), model, normalization);
  MetricsReport cand =
      system_report(build_system(candidate, module, voter), model, normalization);
  ComparisonRow row = compare(base, cand);
  std::ostringstream os;
  if (format == "json") {
    nlohmann::ordered_json j;
    j["baseline"] = nlohmann::ordered_json::parse(base.to_json());
    j["candidate"] = nlohmann::ordered_json::parse(cand.to_json());
    j["comparison"] = nlohmann::ordered_json::parse(row.to_json());
    os << j.dump(2) << "\n";
  } else {
    os << render_table({base, cand}) << "\n" << render_table(row);
  }
  write_output(os.str(), out);
  return 0;
}

int run_reliability(const std::string& scheme_str,
                    const std::string& module_sel, const std::string& voter,
                    const std::string& mode_name, const std::string& r_spec,
                    uint64_t trials, uint64_t seed, const std::string& fault,
                    const std::string& format, const std::string& out) {
  RedundancyScheme scheme = RedundancyScheme::parse(scheme_str);
  ReliabilityMode mode;
  if (mode_name == "analytic") {
    mode = ReliabilityMode::Analytic;
  } else if (mode_name == "mc-guarantee") {
    mode = ReliabilityMode::MonteCarloGuarantee;
  } else if (mode_name == "mc-circuit") {
    mode = ReliabilityMode::MonteCarloCircuit;
  } else {
    throw Error("unknown mode '" + mode_name +
                "'; use analytic, mc-guarantee, or mc-circuit");
  }
  MonteCarloOptions options;
  if (fault == "stuck0") options.circuit_fault = FaultKind::Stuck0;
  else if (fault == "stuck1") options.circuit_fault = FaultKind::Stuck1;
  else if (fault == "invert") options.circuit_fault = FaultKind::Invert;
  else throw Error("unknown fault behavior '" + fault + "'");

  RangeSpec range = parse_range(r_spec);
  ReliabilityCurve curve;
  if (mode == ReliabilityMode::Analytic) {
    if (range.steps == 0) {
      curve.scheme = scheme.to_string();
      curve.mode = mode;
      curve.samples.push_back(
          {range.r_min, analytic_reliability(scheme, range.r_min), 0.0});
    } else {
      curve = analytic_curve(scheme, range.r_min, range.r_max, range.steps);
    }
  } else {
    RedundantSystem sys = build_system(scheme_str, load_module(module_sel),
                                       voter);
    if (range.steps == 0) {
      MonteCarloResult mc =
          monte_carlo_reliability(sys, range.r_min, trials, mode, seed, options);
      curve.scheme = scheme.to_string();
      curve.mode = mode;
      curve.seed = seed;
      curve.trials = trials;
      curve.samples.push_back({range.r_min, mc.r_hat, mc.halfwidth});
    } else {
      curve = monte_carlo_curve(sys, range.r_min, range.r_max, range.steps,
                                trials, mode, seed, options);
    }
  }
  write_output(format == "json" ? curve.to_json() + "\n" : curve.to_csv(), out);
  return 0;
}

int run_paper_table(const std::string& fixture_path, const std::string& format,
                    const std::string& out) {
  std::string csv =
      fixture_path.empty() ? table1_fixture_csv() : read_file(fixture_path);
  Table1Summary summary = table1_reductions(parse_table1_csv(csv));
  write_output(format == "json" ? summary.to_json() + "\n"
                                : summary.render_table(),
               out);
  return 0;
}

int run_export_verilog(const std::string& scheme, const std::string& module_sel,
                       const std::string& netlist_path,
                       const std::string& voter, const std::string& out) {
  Netlist nl;
  if (!netlist_path.empty()) {
    nl = from_json(read_file(netlist_path));
  } else if (!scheme.empty()) {
    nl = build_system(scheme, load_module(module_sel), voter).netlist;
  } else {
    nl = load_module(module_sel);
  }
  VerilogExport v = export_structural_verilog(nl);
  write_output(v.text, out);
  for (const auto& [from, to] : v.renames) {
    std::cerr << "renamed: " << from << " -> " << to << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "redundis: build, verify, and evaluate NMR / 3-of-M DMMR redundant "
      "circuits"};
  app.require_subcommand(1);

  std::string scheme, module_sel = "braun4", voter = "auto", out;
  std::string format = "table";
  std::string netlist_path, model_path, fixture_path;
  std::string baseline, candidate;
  std::string mode_name = "analytic", r_spec = "0:1:101", fault = "invert";
  std::string norm = "two-input";
  uint64_t trials = 100000, seed = 1;

  CLI::App* gen = app.add_subcommand("gen", "build a redundant system netlist");
  gen->add_option("--scheme", scheme, "nmr:<odd n> or dmmr:3of<m>")->required();
  gen->add_option("--module", module_sel, "braun4 | braun:<w> | fulladder | netlist JSON path");
  gen->add_option("--voter", voter, "NMR voter construction: auto | sop | count");
  gen->add_option("-o,--out", out, "output path (default stdout)");

  CLI::App* verify =
      app.add_subcommand("verify", "exhaustively verify the masking guarantee "
                                   "and its tightness");
  verify->add_option("--scheme", scheme)->required();
  verify->add_option("--module", module_sel);
  verify->add_option("--netlist", netlist_path,
                     "replace the built system netlist (same ports/names)");
  verify->add_option("--voter", voter);
  verify->add_option("--format", format, "table | json");
  verify->add_option("-o,--out", out);

  CLI::App* metrics = app.add_subcommand("metrics", "area / delay / ADP report");
  metrics->add_option("--scheme", scheme, "optional; bare module when absent");
  metrics->add_option("--module", module_sel);
  metrics->add_option("--voter", voter);
  metrics->add_option("--normalization", norm, "two-input | wide");
  metrics->add_option("--delay-model", model_path, "delay model JSON path");
  metrics->add_option("--format", format);
  metrics->add_option("-o,--out", out);

  CLI::App* cmp = app.add_subcommand("compare", "like-for-like scheme comparison");
  cmp->add_option("--baseline", baseline)->required();
  cmp->add_option("--candidate", candidate)->required();
  cmp->add_option("--module", module_sel);
  cmp->add_option("--voter", voter);
  cmp->add_option("--normalization", norm);
  cmp->add_option("--delay-model", model_path);
  cmp->add_option("--format", format);
  cmp->add_option("-o,--out", out);

  CLI::App* rel = app.add_subcommand("reliability", "reliability curves R(r)");
  rel->add_option("--scheme", scheme)->required();
  rel->add_option("--mode", mode_name, "analytic | mc-guarantee | mc-circuit");
  rel->add_option("--r", r_spec, "<r> or <min>:<max>:<steps>");
  rel->add_option("--trials", trials);
  rel->add_option("--seed", seed);
  rel->add_option("--module", module_sel, "module for mc modes");
  rel->add_option("--voter", voter);
  rel->add_option("--fault", fault, "mc-circuit fault: invert | stuck0 | stuck1");
  rel->add_option("--format", format, "csv | json");
  rel->add_option("-o,--out", out);

  CLI::App* paper = app.add_subcommand(
      "paper-table", "ADP reductions from the bundled synthesis dataset");
  paper->add_option("--fixture", fixture_path, "CSV path (default: bundled)");
  paper->add_option("--format", format, "table | json");
  paper->add_option("-o,--out", out);

  CLI::App* verilog =
      app.add_subcommand("export-verilog", "structural Verilog export");
  verilog->add_option("--module", module_sel);
  verilog->add_option("--scheme", scheme, "export the composed system");
  verilog->add_option("--netlist", netlist_path, "export a netlist JSON file");
  verilog->add_option("--voter", voter);
  verilog->add_option("-o,--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(scheme, module_sel, voter, out);
    if (verify->parsed()) {
      return run_verify(scheme, module_sel, netlist_path, voter, format, out);
    }
    if (metrics->parsed()) {
      return run_metrics(scheme, module_sel, voter, norm, model_path, format,
                         out);
    }
    if (cmp->parsed()) {
      return run_compare(baseline, candidate, module_sel, voter, norm,
                         model_path, format, out);
    }
    if (rel->parsed()) {
      return run_reliability(scheme, module_sel, voter, mode_name, r_spec,
                             trials, seed, fault, format, out);
    }
    if (paper->parsed()) return run_paper_table(fixture_path, format, out);
    if (verilog->parsed()) {
      return run_export_verilog(scheme, module_sel, netlist_path, voter, out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
