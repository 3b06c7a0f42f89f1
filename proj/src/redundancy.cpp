#include "redundis/redundancy.hpp"

#include <cctype>

namespace redundis {

RedundancyScheme RedundancyScheme::nmr(int n) {
  if (n < 3 || n % 2 == 0) {
    throw Error("nmr: n must be odd and >= 3, got " + std::to_string(n));
  }
  return {Kind::Nmr, n};
}

RedundancyScheme RedundancyScheme::dmmr(int m) {
  if (m < 5) {
    throw Error("dmmr: m must be >= 5, got " + std::to_string(m));
  }
  return {Kind::Dmmr, m};
}

std::string RedundancyScheme::to_string() const {
  if (kind == Kind::Nmr) return "nmr:" + std::to_string(size);
  return "dmmr:3of" + std::to_string(size);
}

RedundancyScheme RedundancyScheme::parse(const std::string& text) {
  auto fail = [&text]() -> RedundancyScheme {
    throw Error("cannot parse scheme '" + text +
                "'; expected nmr:<odd n> or dmmr:3of<m>");
  };
  auto parse_int = [&](const std::string& s) {
    if (s.empty()) fail();
    for (char c : s) {
      if (!isdigit(static_cast<unsigned char>(c))) fail();
    }
    if (s.size() > 3) fail();
    return std::stoi(s);
  };
  if (text.rfind("nmr:", 0) == 0) {
    int n = parse_int(text.substr(4));
    if (n % 2 == 0) throw Error("nmr: n must be odd, got " + std::to_string(n));
    return nmr(n);
  }
  if (text.rfind("dmmr:3of", 0) == 0) return dmmr(parse_int(text.substr(8)));
  return fail();
}

ToleranceDescriptor tolerance(const RedundancyScheme& scheme) {
  ToleranceDescriptor d;
  if (scheme.kind == RedundancyScheme::Kind::Nmr) {
    d.total_guaranteed = (scheme.size - 1) / 2;
    d.conditional_total = d.total_guaranteed;
  } else {
    d.majority_budget = 1;
    d.minority_budget = scheme.size - 4;
    d.conditional_total = scheme.size - 3;
    // two arbitrary faults can both land in the majority group and defeat
    // it, so the unconditional guarantee stays at 1
    d.total_guaranteed = 1;
  }
  return d;
}

namespace {

RedundantSystem build_system(const Netlist& module,
                             const RedundancyScheme& scheme,
                             const Netlist& voter,
                             VoterConstruction construction) {
  ValidationReport report = validate(module);
  if (!report.ok()) {
    throw Error("function module '" + module.name +
                "' is invalid: " + report.issues.front().message);
  }
  if (module.outputs.empty()) {
    throw Error("function module '" + module.name + "' has no outputs");
  }

  const int replicas = scheme.replica_count();
  RedundantSystem sys;
  sys.scheme = scheme;
  sys.golden_module = module;
  sys.voter_construction = construction;

  Netlist top;
  top.name = module.name + "_" +
             (scheme.is_dmmr() ? "dmmr3of" + std::to_string(replicas)
                               : "nmr" + std::to_string(replicas));
  top.inputs = module.inputs;
  top.outputs = module.outputs;

  // replicas share the primary inputs
  for (int r = 1; r <= replicas; ++r) {
    std::string prefix = module.name + "_r" + std::to_string(r) + "_";
    PortBinding binding;
    for (const auto& in : module.inputs) binding[in] = in;
    std::vector<std::string> out_nets;
    for (const auto& out : module.outputs) {
      binding[out] = prefix + out;
      out_nets.push_back(prefix + out);
    }
    top = instantiate(top, module, binding, prefix);
    sys.module_output_nets.push_back(std::move(out_nets));
  }

  // one voter per output bit
  for (size_t j = 0; j < module.outputs.size(); ++j) {
    PortBinding binding;
    for (int r = 0; r < replicas; ++r) {
      binding["f" + std::to_string(r + 1)] = sys.module_output_nets[r][j];
    }
    binding[voter.outputs.front()] = module.outputs[j];
    top = instantiate(top, voter, binding, "vote_" + module.outputs[j] + "_");
  }

  report = validate(top);
  if (!report.ok()) {
    throw Error("composed system '" + top.name +
                "' failed validation: " + report.issues.front().message);
  }
  sys.netlist = std::move(top);
  return sys;
}

}  // namespace

RedundantSystem build_nmr(const Netlist& module, int n,
                          std::optional<VoterConstruction> voter) {
  if (n < 3 || n > 9 || n % 2 == 0) {
    throw Error("build_nmr: n must be odd and within [3, 9], got " +
                std::to_string(n));
  }
  VoterConstruction construction =
      voter.value_or(default_voter_construction(n));
  return build_system(module, RedundancyScheme::nmr(n),
                      majority_voter(n, construction), construction);
}

RedundantSystem build_dmmr(const Netlist& module, int m) {
  if (m < 5 || m > 9) {
    throw Error("build_dmmr: m must be within [5, 9], got " +
                std::to_string(m));
  }
  // the 2-of-3 stage inside the DMMR voter is the classic product form
  return build_system(module, RedundancyScheme::dmmr(m), dmmr_voter(m),
                      VoterConstruction::SumOfProducts);
}

}  // namespace redundis
