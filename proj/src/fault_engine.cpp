#include "redundis/fault_engine.hpp"

#include <algorithm>
#include <unordered_map>

#include <json.hpp>

#include "parallel.hpp"

namespace redundis {

std::string_view to_string(FaultBehavior behavior) {
  switch (behavior) {
    case FaultBehavior::Stuck0: return "stuck0";
    case FaultBehavior::Stuck1: return "stuck1";
    case FaultBehavior::Inverted: return "inverted";
    case FaultBehavior::Adversarial: return "adversarial";
  }
  return "?";
}

namespace {

std::string hex_row(uint64_t row, int input_count) {
  int digits = (input_count + 3) / 4;
  if (digits < 1) digits = 1;
  static const char* kHex = "0123456789ABCDEF";
  std::string s(static_cast<size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    s[i] = kHex[row & 0xF];
    row >>= 4;
  }
  return "0x" + s;
}

// k-subsets of {1..n}, lexicographic
std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> result;
  if (k < 0 || k > n) return result;
  if (k == 0) {
    result.push_back({});
    return result;
  }
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i + 1;
  while (true) {
    result.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i + 1) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return result;
}

void check_pattern(const RedundantSystem& system, const FaultPattern& pattern) {
  int last = 0;
  for (int r : pattern.replicas) {
    if (r <= last) {
      throw Error("fault pattern replica indices must be ascending and unique");
    }
    if (r < 1 || r > system.scheme.replica_count()) {
      throw Error("fault pattern names replica " + std::to_string(r) +
                  " but the scheme has " +
                  std::to_string(system.scheme.replica_count()) + " replicas");
    }
    last = r;
  }
}

FaultKind concrete_kind(FaultBehavior behavior) {
  switch (behavior) {
    case FaultBehavior::Stuck0: return FaultKind::Stuck0;
    case FaultBehavior::Stuck1: return FaultKind::Stuck1;
    default: return FaultKind::Invert;
  }
}

// Shared per-system evaluation state: compiled netlists, the golden truth
// table, replica output net indices and (when licensed) per-bit voter cones.
struct SystemContext {
  const RedundantSystem& system;
  CompiledNetlist sys;
  CompiledNetlist golden;
  int p, q;
  uint64_t rows;
  std::vector<uint64_t> golden_words;
  std::vector<std::vector<int>> rep_out;  // [replica-1][bit] -> sys net index
  std::vector<char> rep_out_mask;
  bool independent = false;
  std::string independence_diag;
  std::vector<CompiledNetlist::Cone> cones;  // per output bit
  // fault-free net values per row, cached when small enough
  std::vector<std::vector<uint8_t>> base_cache;

  explicit SystemContext(const RedundantSystem& s)
      : system(s), sys(s.netlist), golden(s.golden_module) {
    if (s.netlist.inputs != s.golden_module.inputs ||
        s.netlist.outputs != s.golden_module.outputs) {
      throw Error("system and golden module must expose identical ports");
    }
    p = static_cast<int>(s.netlist.inputs.size());
    q = static_cast<int>(s.netlist.outputs.size());
    if (p > 16) {
      throw Error("exhaustive verification is guarded at 16 module inputs; '" +
                  s.golden_module.name + "' has " + std::to_string(p) +
                  " — use sampled evaluation instead");
    }
    rows = uint64_t{1} << p;

    TruthTable gt = truth_table(s.golden_module);
    golden_words = std::move(gt.rows);

    rep_out_mask.assign(sys.net_count(), 0);
    for (size_t r = 0; r < s.module_output_nets.size(); ++r) {
      std::vector<int> nets;
      for (const auto& name : s.module_output_nets[r]) {
        int idx = sys.net_index(name);
        if (idx < 0) {
          throw Error("replica output net '" + name +
                      "' does not exist in the system netlist");
        }
        nets.push_back(idx);
        rep_out_mask[idx] = 1;
      }
      rep_out.push_back(std::move(nets));
    }

    check_independence();
    if (independent) {
      for (int j = 0; j < q; ++j) {
        cones.push_back(sys.cone_of(sys.output_nets()[j], rep_out_mask));
      }
    }

    if (rows * static_cast<uint64_t>(sys.net_count()) <= (32u << 20)) {
      base_cache.resize(rows);
      std::vector<uint8_t> values(sys.net_count(), 0);
      for (uint64_t row = 0; row < rows; ++row) {
        set_inputs(values, row);
        sys.evaluate(values);
        base_cache[row] = values;
      }
    }
  }

  void set_inputs(std::vector<uint8_t>& values, uint64_t row) const {
    for (int i = 0; i < p; ++i) {
      values[sys.input_nets()[i]] = static_cast<uint8_t>((row >> (p - 1 - i)) & 1);
    }
  }

  bool golden_bit(uint64_t row, int bit) const {
    return (golden_words[row] >> (q - 1 - bit)) & 1;
  }

  const std::vector<uint8_t>& base_values(uint64_t row,
                                          std::vector<uint8_t>& scratch) const {
    if (!base_cache.empty()) return base_cache[row];
    set_inputs(scratch, row);
    sys.evaluate(scratch);
    return scratch;
  }

 private:
  // The cone of output bit j may touch replica outputs only at bit j.
  void check_independence() {
    std::unordered_map<int, std::pair<int, int>> owner;  // net -> (replica, bit)
    for (size_t r = 0; r < rep_out.size(); ++r) {
      for (size_t j = 0; j < rep_out[r].size(); ++j) {
        owner[rep_out[r][j]] = {static_cast<int>(r) + 1, static_cast<int>(j)};
      }
    }
    std::vector<char> no_boundary;
    for (int j = 0; j < q; ++j) {
      CompiledNetlist::Cone full =
          sys.cone_of(sys.output_nets()[j], no_boundary);
      auto offends = [&](int net) -> bool {
        auto it = owner.find(net);
        return it != owner.end() && it->second.second != j;
      };
      for (int net : full.sources) {
        if (offends(net)) {
          independence_diag =
              "output '" + system.netlist.outputs[j] + "' reads replica " +
              std::to_string(owner[net].first) + "'s output bit " +
              std::to_string(owner[net].second) + " ('" + sys.net_name(net) +
              "')";
          return;
        }
      }
      for (int gi : full.gate_order) {
        const auto& g = sys.gates()[gi];
        for (int k = 0; k < g.ins_count; ++k) {
          int net = sys.gate_inputs()[g.ins_begin + k];
          if (offends(net)) {
            independence_diag =
                "output '" + system.netlist.outputs[j] + "' reads replica " +
                std::to_string(owner[net].first) + "'s output bit " +
                std::to_string(owner[net].second) + " ('" + sys.net_name(net) +
                "')";
            return;
          }
        }
      }
    }
    independent = true;
  }
};

FaultOverlay whole_replica_overlay(const SystemContext& ctx,
                                   const FaultPattern& pattern,
                                   FaultKind kind) {
  FaultOverlay overlay;
  for (int r : pattern.replicas) {
    for (const auto& net : ctx.system.module_output_nets[r - 1]) {
      overlay[net] = kind;
    }
  }
  return overlay;
}

// Exhaustive sweep for one pattern under a concrete behavior.
std::optional<Counterexample> concrete_search(const SystemContext& ctx,
                                              const FaultPattern& pattern,
                                              FaultBehavior behavior) {
  FaultOverlay overlay = whole_replica_overlay(ctx, pattern,
                                               concrete_kind(behavior));
  CompiledNetlist::Actions actions = ctx.sys.actions_for(overlay);
  std::vector<uint8_t> values(ctx.sys.net_count(), 0);
  for (uint64_t row = 0; row < ctx.rows; ++row) {
    ctx.set_inputs(values, row);
    ctx.sys.evaluate(values, actions);
    for (int j = 0; j < ctx.q; ++j) {
      bool got = values[ctx.sys.output_nets()[j]] != 0;
      bool expected = ctx.golden_bit(row, j);
      if (got != expected) {
        Counterexample ce;
        ce.pattern = pattern;
        ce.behavior = behavior;
        ce.input_row = row;
        ce.input_bits = ctx.p;
        ce.output_bit = j;
        ce.got = got;
        ce.expected = expected;
        ce.overlay = overlay;
        return ce;
      }
    }
  }
  return std::nullopt;
}

// Per-bit adversarial enumeration: for each output bit, every assignment of
// the faulty replicas' copies of that bit, with fault-free values taken from
// the actual system simulation.
std::optional<Counterexample> per_bit_search(const SystemContext& ctx,
                                             const FaultPattern& pattern,
                                             uint64_t row_begin,
                                             uint64_t row_end) {
  // nets to force per output bit: the faulty replicas' copies of that bit
  // (skipping any that do not actually feed the bit's cone)
  std::vector<std::vector<int>> faulty_net(ctx.q);
  for (int j = 0; j < ctx.q; ++j) {
    for (int r : pattern.replicas) {
      int net = ctx.rep_out[r - 1][j];
      const auto& sources = ctx.cones[j].sources;
      if (std::find(sources.begin(), sources.end(), net) != sources.end()) {
        faulty_net[j].push_back(net);
      }
    }
  }

  std::vector<uint8_t> scratch(ctx.sys.net_count(), 0);
  std::vector<uint8_t> base_scratch(ctx.sys.net_count(), 0);
  for (uint64_t row = row_begin; row < row_end; ++row) {
    const std::vector<uint8_t>& base = ctx.base_values(row, base_scratch);
    for (int j = 0; j < ctx.q; ++j) {
      const auto& cone = ctx.cones[j];
      const bool expected = ctx.golden_bit(row, j);
      const uint32_t bit_choices =
          uint32_t{1} << faulty_net[j].size();
      for (uint32_t a = 0; a < bit_choices; ++a) {
        for (int s : cone.sources) scratch[s] = base[s];
        for (size_t i = 0; i < faulty_net[j].size(); ++i) {
          scratch[faulty_net[j][i]] = static_cast<uint8_t>((a >> i) & 1);
        }
        ctx.sys.evaluate_cone(cone, scratch);
        bool got = scratch[cone.target_net] != 0;
        if (got != expected) {
          Counterexample ce;
          ce.pattern = pattern;
          ce.behavior = FaultBehavior::Adversarial;
          ce.input_row = row;
          ce.input_bits = ctx.p;
          ce.output_bit = j;
          ce.got = got;
          ce.expected = expected;
          for (size_t i = 0; i < faulty_net[j].size(); ++i) {
            ce.overlay[ctx.sys.net_name(faulty_net[j][i])] =
                ((a >> i) & 1) ? FaultKind::Stuck1 : FaultKind::Stuck0;
          }
          return ce;
        }
      }
    }
  }
  return std::nullopt;
}

// Joint enumeration over all output bits of all faulty replicas. Exponential
// in (faulty replicas x output bits); used only when per-bit reduction is
// not licensed.
std::optional<Counterexample> whole_vector_search(const SystemContext& ctx,
                                                  const FaultPattern& pattern) {
  std::vector<int> forced_nets;
  for (int r : pattern.replicas) {
    for (int net : ctx.rep_out[r - 1]) forced_nets.push_back(net);
  }
  if (forced_nets.size() > 16) {
    throw Error(
        "whole-vector adversarial enumeration needs 2^" +
        std::to_string(forced_nets.size()) +
        " assignments per input; per-bit reduction is unavailable (" +
        ctx.independence_diag + ") and the joint search is guarded at 2^16");
  }
  const uint32_t choices = uint32_t{1} << forced_nets.size();
  CompiledNetlist::Actions actions = ctx.sys.no_actions();
  std::vector<uint8_t> values(ctx.sys.net_count(), 0);
  for (uint64_t row = 0; row < ctx.rows; ++row) {
    for (uint32_t a = 0; a < choices; ++a) {
      for (size_t i = 0; i < forced_nets.size(); ++i) {
        actions[forced_nets[i]] = static_cast<int8_t>((a >> i) & 1);
      }
      ctx.set_inputs(values, row);
      ctx.sys.evaluate(values, actions);
      for (int j = 0; j < ctx.q; ++j) {
        bool got = values[ctx.sys.output_nets()[j]] != 0;
        bool expected = ctx.golden_bit(row, j);
        if (got != expected) {
          Counterexample ce;
          ce.pattern = pattern;
          ce.behavior = FaultBehavior::Adversarial;
          ce.input_row = row;
          ce.input_bits = ctx.p;
          ce.output_bit = j;
          ce.got = got;
          ce.expected = expected;
          for (size_t i = 0; i < forced_nets.size(); ++i) {
            ce.overlay[ctx.sys.net_name(forced_nets[i])] =
                ((a >> i) & 1) ? FaultKind::Stuck1 : FaultKind::Stuck0;
          }
          return ce;
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<Counterexample> adversarial_search(const SystemContext& ctx,
                                                 const FaultPattern& pattern,
                                                 const VerifyOptions& options,
                                                 uint64_t row_begin,
                                                 uint64_t row_end) {
  switch (options.strategy) {
    case AdversaryStrategy::PerBit:
      if (!ctx.independent) {
        throw Error("per-bit adversarial enumeration is not licensed: " +
                    ctx.independence_diag);
      }
      return per_bit_search(ctx, pattern, row_begin, row_end);
    case AdversaryStrategy::WholeVector:
      return whole_vector_search(ctx, pattern);
    case AdversaryStrategy::Auto:
      if (ctx.independent) return per_bit_search(ctx, pattern, row_begin, row_end);
      return whole_vector_search(ctx, pattern);
  }
  return std::nullopt;
}

std::vector<FaultPattern> guarantee_patterns(const RedundancyScheme& scheme) {
  std::vector<FaultPattern> all;
  int limit = tolerance(scheme).conditional_total;
  for (int card = 1; card <= limit; ++card) {
    std::vector<FaultPattern> level = conforming_patterns(scheme, card);
    all.insert(all.end(), level.begin(), level.end());
  }
  return all;
}

}  // namespace

std::vector<FaultPattern> conforming_patterns(const RedundancyScheme& scheme,
                                              int cardinality) {
  if (cardinality < 0) {
    throw Error("conforming_patterns: cardinality must be >= 0");
  }
  std::vector<FaultPattern> result;
  for (auto& subset : k_subsets(scheme.replica_count(), cardinality)) {
    FaultPattern p{std::move(subset)};
    if (is_conforming(scheme, p)) result.push_back(std::move(p));
  }
  return result;
}

bool is_conforming(const RedundancyScheme& scheme, const FaultPattern& pattern) {
  if (scheme.kind == RedundancyScheme::Kind::Nmr) {
    return static_cast<int>(pattern.replicas.size()) <= (scheme.size - 1) / 2;
  }
  int majority = 0, minority = 0;
  for (int r : pattern.replicas) {
    (r <= 3 ? majority : minority) += 1;
  }
  return majority <= 1 && minority <= scheme.size - 4;
}

bool bitwise_voting_independent(const RedundantSystem& system,
                                std::string* diagnostic) {
  SystemContext ctx(system);
  if (diagnostic) *diagnostic = ctx.independence_diag;
  return ctx.independent;
}

MaskingVerdict verify_masking(const RedundantSystem& system,
                              const FaultPattern& pattern,
                              FaultBehavior behavior,
                              const VerifyOptions& options) {
  check_pattern(system, pattern);
  SystemContext ctx(system);
  MaskingVerdict verdict;
  verdict.patterns_checked = 1;
  verdict.inputs_per_pattern = ctx.rows;
  std::optional<Counterexample> ce;
  if (behavior == FaultBehavior::Adversarial) {
    ce = adversarial_search(ctx, pattern, options, 0, ctx.rows);
  } else {
    ce = concrete_search(ctx, pattern, behavior);
  }
  verdict.verified = !ce.has_value();
  verdict.counterexample = std::move(ce);
  return verdict;
}

MaskingVerdict verify_guarantee(const RedundantSystem& system,
                                const VerifyOptions& options) {
  SystemContext ctx(system);
  std::vector<FaultPattern> patterns = guarantee_patterns(system.scheme);

  MaskingVerdict verdict;
  verdict.patterns_checked = patterns.size();
  verdict.inputs_per_pattern = ctx.rows;

  std::vector<std::optional<Counterexample>> failures(patterns.size());
  parallel_chunks(
      patterns.size(), worker_count(options.max_threads),
      [&](int, uint64_t begin, uint64_t end) {
        for (uint64_t i = begin; i < end; ++i) {
          failures[i] =
              adversarial_search(ctx, patterns[i], options, 0, ctx.rows);
        }
      });

  verdict.verified = true;
  for (auto& failure : failures) {
    if (failure) {
      verdict.verified = false;
      verdict.counterexample = std::move(failure);
      break;  // patterns are enumerated in lexicographic order
    }
  }
  return verdict;
}

std::optional<Counterexample> find_counterexample(const RedundantSystem& system,
                                                  int cardinality,
                                                  const VerifyOptions& options) {
  if (cardinality < 0) {
    throw Error("find_counterexample: cardinality must be >= 0");
  }
  SystemContext ctx(system);
  for (auto& subset : k_subsets(system.scheme.replica_count(), cardinality)) {
    FaultPattern pattern{std::move(subset)};
    if (is_conforming(system.scheme, pattern)) continue;
    std::optional<Counterexample> ce =
        adversarial_search(ctx, pattern, options, 0, ctx.rows);
    if (ce) return ce;
  }
  return std::nullopt;
}

std::string Counterexample::to_json() const {
  nlohmann::ordered_json j;
  j["pattern"] = pattern.replicas;
  j["behavior"] = std::string(redundis::to_string(behavior));
  j["input"] = hex_row(input_row, input_bits > 0 ? input_bits : 8);
  j["bit"] = output_bit;
  j["got"] = got ? 1 : 0;
  j["expected"] = expected ? 1 : 0;
  if (behavior == FaultBehavior::Adversarial) {
    nlohmann::ordered_json forced;
    for (const auto& [net, kind] : overlay) {
      forced[net] = kind == FaultKind::Stuck1 ? 1 : 0;
    }
    j["forced"] = std::move(forced);
  }
  return j.dump();
}

}  // namespace redundis
