// Acceptance suite: runs every top-level requirement end to end and prints
// one PASS/FAIL line per criterion. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "redundis/fault_engine.hpp"
#include "redundis/metrics.hpp"
#include "redundis/modules.hpp"
#include "redundis/redundancy.hpp"
#include "redundis/reliability.hpp"
#include "redundis/simulator.hpp"
#include "redundis/table1.hpp"

using namespace redundis;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::function<void(std::string&)> body;  // throws or appends to notes
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& what) {
  if (!condition) throw Failure(what);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

int popcount_bits(uint64_t v, int width) {
  int count = 0;
  for (int i = 0; i < width; ++i) count += static_cast<int>((v >> i) & 1);
  return count;
}

// --- criterion bodies ---------------------------------------------------

void criterion1_multiplier(std::string& notes) {
  auto start = std::chrono::steady_clock::now();
  TruthTable table = truth_table(braun_multiplier(4));
  require(table.rows.size() == 256, "expected 256 rows");
  for (uint64_t a = 0; a < 16; ++a) {
    for (uint64_t b = 0; b < 16; ++b) {
      require(table.rows[(a << 4) | b] == a * b,
              "product mismatch at A=" + std::to_string(a) +
                  " B=" + std::to_string(b));
    }
  }
  double elapsed = seconds_since(start);
  require(elapsed < 1.0, "runtime budget of 1 s exceeded");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "256/256 products exact in %.3f s", elapsed);
  notes = buf;
}

void criterion2_voters(std::string& notes) {
  for (int n : {3, 5, 7, 9}) {
    for (VoterConstruction c :
         {VoterConstruction::SumOfProducts, VoterConstruction::CountCompare}) {
      TruthTable t = truth_table(majority_voter(n, c));
      for (uint64_t v = 0; v < t.rows.size(); ++v) {
        uint64_t expect = popcount_bits(v, n) >= (n + 1) / 2 ? 1 : 0;
        require(t.rows[v] == expect,
                "majority_voter(" + std::to_string(n) + ", " +
                    std::string(to_string(c)) + ") wrong at row " +
                    std::to_string(v));
      }
    }
  }
  for (int m : {5, 6, 7}) {
    Netlist voter = dmmr_voter(m);
    Netlist probe = voter;
    probe.outputs = {"MAJ", "MIN", "DMMRO"};
    TruthTable t = truth_table(probe);
    require(t.rows.size() == (uint64_t{1} << m) && t.rows.size() <= 128,
            "row count");
    for (uint64_t v = 0; v < t.rows.size(); ++v) {
      auto bit = [&](int i) { return (v >> (m - i)) & 1; };  // 1-based index
      uint64_t maj = (bit(1) + bit(2) + bit(3)) >= 2 ? 1 : 0;
      uint64_t min_or = 0;
      for (int i = 4; i <= m; ++i) min_or |= bit(i);
      uint64_t expect = (maj << 2) | (min_or << 1) | (maj & min_or);
      require(t.rows[v] == expect, "dmmr_voter(" + std::to_string(m) +
                                       ") wrong at row " + std::to_string(v));
    }
    // worked fault scenarios: correct value 1 with replicas {3,5..m}
    // corrupted low, and correct value 0 with the same replicas corrupted high
    Assignment up, down;
    for (int i = 1; i <= m; ++i) {
      bool corrupted = (i == 3) || (i >= 5);
      up["f" + std::to_string(i)] = !corrupted;
      down["f" + std::to_string(i)] = corrupted;
    }
    require(evaluate(voter, up).at("DMMRO") == true,
            "scenario with correct value 1 not masked");
    require(evaluate(voter, down).at("DMMRO") == false,
            "scenario with correct value 0 not masked");
  }
  notes = "8 voter tables exhaustive; 3 DMMR voters + 2 worked scenarios each";
}

void criterion3_guarantees(std::string& notes) {
  auto start = std::chrono::steady_clock::now();
  Netlist braun = braun_multiplier(4);
  struct Case {
    RedundantSystem sys;
    int expected_tolerance;
  };
  std::vector<Case> cases;
  cases.push_back({build_nmr(braun, 5), 2});
  cases.push_back({build_nmr(braun, 7), 3});
  cases.push_back({build_nmr(braun, 9), 4});
  cases.push_back({build_dmmr(braun, 5), 2});
  cases.push_back({build_dmmr(braun, 6), 3});
  cases.push_back({build_dmmr(braun, 7), 4});
  uint64_t total_patterns = 0;
  for (const Case& c : cases) {
    require(tolerance(c.sys.scheme).conditional_total == c.expected_tolerance,
            c.sys.scheme.to_string() + ": unexpected tolerance descriptor");
    MaskingVerdict v = verify_guarantee(c.sys);
    require(v.verified, c.sys.scheme.to_string() + ": guarantee violated" +
                            (v.counterexample ? ": " + v.counterexample->to_json()
                                              : ""));
    require(v.inputs_per_pattern == 256, "input sweep must be exhaustive");
    total_patterns += v.patterns_checked;
  }
  double elapsed = seconds_since(start);
  require(elapsed < 300.0, "runtime budget of 5 min exceeded");
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "6 schemes, %llu conforming patterns, adversarial, %.1f s",
                static_cast<unsigned long long>(total_patterns), elapsed);
  notes = buf;
}

void criterion4_tightness(std::string& notes) {
  Netlist braun = braun_multiplier(4);
  auto replay = [&](const RedundantSystem& sys, const Counterexample& ce) {
    const size_t p = sys.netlist.inputs.size();
    Assignment stim;
    for (size_t i = 0; i < p; ++i) {
      stim[sys.netlist.inputs[i]] = ((ce.input_row >> (p - 1 - i)) & 1) != 0;
    }
    const std::string& out = sys.netlist.outputs[ce.output_bit];
    bool golden = evaluate(sys.golden_module, stim).at(out);
    bool faulty = evaluate(sys.netlist, stim, ce.overlay).at(out);
    require(golden == ce.expected && faulty == ce.got && golden != faulty,
            "witness did not replay to a mismatch");
  };
  for (int n : {3, 5, 7, 9}) {
    RedundantSystem sys = build_nmr(braun, n);
    auto ce = find_counterexample(sys, (n + 1) / 2);
    require(ce.has_value(), "no witness for nmr:" + std::to_string(n));
    replay(sys, *ce);
  }
  for (int m : {5, 6, 7}) {
    RedundantSystem sys = build_dmmr(braun, m);
    auto ce = find_counterexample(sys, 2);
    require(ce.has_value(), "no witness for dmmr m=" + std::to_string(m));
    require(ce->pattern.replicas.size() == 2 && ce->pattern.replicas[0] <= 3 &&
                ce->pattern.replicas[1] <= 3,
            "witness should hit the majority group twice");
    replay(sys, *ce);
  }
  notes = "7 witnesses found, all replayed to mismatches";
}

void criterion5_dataset(std::string& notes) {
  std::vector<Table1Row> rows = parse_table1_csv(table1_fixture_csv());
  require(rows.size() == 24, "expected 24 dataset rows");
  for (const auto& row : rows) {
    require(std::fabs(row.adp - row.delay_ns * row.area_bels) < 0.01,
            row.family + " " + row.scheme + ": ADP is not delay*area");
  }
  Table1Summary s = table1_reductions(rows);
  require(std::fabs(s.commercial_avg_7v6 - 34.1) <= 0.5, "commercial 7v6");
  require(std::fabs(s.radmil_avg_7v6 - 46.0) <= 0.5, "rad/military 7v6");
  require(std::fabs(s.commercial_avg_9v7 - 46.7) <= 0.5, "commercial 9v7");
  require(std::fabs(s.radmil_avg_9v7 - 58.3) <= 0.5, "rad/military 9v7");
  // the quoted overall averages are NOT the per-family arithmetic means;
  // the computed alternatives must be reported and the difference flagged
  require(std::fabs(s.four_family_mean_7v6 - 40.0) <= 0.5, "computed mean 7v6");
  require(std::fabs(s.four_family_mean_9v7 - 52.5) <= 0.5, "computed mean 9v7");
  require(!s.quoted_matches_computed_7v6 && !s.quoted_matches_computed_9v7,
          "quoted/computed discrepancy must be flagged");
  require(s.render_table().find("NOTE") != std::string::npos,
          "summary must surface the discrepancy");
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "34.1/46/46.7/58.3 reproduced; means %.1f/%.1f vs quoted "
                "44.5/56.5 flagged",
                s.four_family_mean_7v6, s.four_family_mean_9v7);
  notes = buf;
}

void criterion6_trends(std::string& notes) {
  Netlist braun = braun_multiplier(4);
  DelayModel unit = DelayModel::unit();
  MetricsReport nmr7 =
      system_report(build_nmr(braun, 7), unit, Normalization::TwoInput);
  MetricsReport dmmr6 =
      system_report(build_dmmr(braun, 6), unit, Normalization::TwoInput);
  MetricsReport nmr9 =
      system_report(build_nmr(braun, 9), unit, Normalization::TwoInput);
  MetricsReport dmmr7 =
      system_report(build_dmmr(braun, 7), unit, Normalization::TwoInput);
  require(dmmr6.weighted_area < nmr7.weighted_area, "area 3of6 < 7MR");
  require(dmmr6.adp < nmr7.adp, "adp 3of6 < 7MR");
  require(dmmr7.weighted_area < nmr9.weighted_area, "area 3of7 < 9MR");
  require(dmmr7.adp < nmr9.adp, "adp 3of7 < 9MR");
  require(compare(nmr7, dmmr6).module_count_delta == 1, "delta 7MR-3of6");
  require(compare(nmr9, dmmr7).module_count_delta == 2, "delta 9MR-3of7");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "adp %.0f<%.0f and %.0f<%.0f; deltas 1, 2",
                dmmr6.adp, nmr7.adp, dmmr7.adp, nmr9.adp);
  notes = buf;
}

void criterion7_reliability(std::string& notes) {
  auto start = std::chrono::steady_clock::now();
  std::vector<RedundancyScheme> schemes = {
      RedundancyScheme::nmr(5),  RedundancyScheme::nmr(7),
      RedundancyScheme::nmr(9),  RedundancyScheme::dmmr(5),
      RedundancyScheme::dmmr(6), RedundancyScheme::dmmr(7)};

  // exhaustive 2^replicas up/down enumeration oracle
  auto enumerate = [](const RedundancyScheme& scheme, double r) {
    const int n = scheme.replica_count();
    double total = 0.0;
    for (uint32_t up = 0; up < (uint32_t{1} << n); ++up) {
      double prob = 1.0;
      for (int i = 0; i < n; ++i) {
        prob *= (up & (uint32_t{1} << i)) ? r : (1.0 - r);
      }
      bool ok;
      if (scheme.kind == RedundancyScheme::Kind::Nmr) {
        ok = __builtin_popcount(up) >= (n + 1) / 2;
      } else {
        ok = __builtin_popcount(up & 0b111u) >= 2 &&
             __builtin_popcount(up >> 3) >= 1;
      }
      if (ok) total += prob;
    }
    return total;
  };
  for (const auto& scheme : schemes) {
    for (double r : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
      require(std::fabs(analytic_reliability(scheme, r) - enumerate(scheme, r)) <
                  1e-12,
              scheme.to_string() + ": analytic != enumeration at r=" +
                  std::to_string(r));
    }
  }

  // seeded Monte Carlo against the analytic value, then circuit vs guarantee
  Netlist braun = braun_multiplier(4);
  const uint64_t trials = 1000000;
  const double r = 0.9;
  for (const auto& scheme : schemes) {
    RedundantSystem sys = scheme.is_dmmr() ? build_dmmr(braun, scheme.size)
                                           : build_nmr(braun, scheme.size);
    double analytic = analytic_reliability(scheme, r);
    double sigma = std::sqrt(analytic * (1.0 - analytic) /
                             static_cast<double>(trials));
    MonteCarloResult guarantee = monte_carlo_reliability(
        sys, r, trials, ReliabilityMode::MonteCarloGuarantee, 42);
    require(std::fabs(guarantee.r_hat - analytic) <= 3.0 * sigma,
            scheme.to_string() + ": guarantee-mode MC outside 3 sigma");
    MonteCarloResult circuit = monte_carlo_reliability(
        sys, r, trials, ReliabilityMode::MonteCarloCircuit, 42);
    double combined = 3.0 / 1.96 *
                      std::sqrt(guarantee.halfwidth * guarantee.halfwidth +
                                circuit.halfwidth * circuit.halfwidth);
    require(circuit.r_hat >= guarantee.r_hat - combined,
            scheme.to_string() + ": circuit-mode MC below guarantee-mode");
  }
  double elapsed = seconds_since(start);
  require(elapsed < 120.0, "runtime budget of 2 min exceeded");
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "36 analytic points at 1e-12; 10^6-trial MC x 6 schemes, %.1f s",
                elapsed);
  notes = buf;
}

void criterion8_determinism(std::string& notes) {
  Netlist braun = braun_multiplier(4);
  require(from_json(to_json(braun)) == braun, "module JSON round trip");
  RedundantSystem sys = build_nmr(braun, 5);
  require(from_json(to_json(sys.netlist)) == sys.netlist,
          "system JSON round trip");
  require(export_structural_verilog(sys.netlist).text ==
              export_structural_verilog(sys.netlist).text,
          "verilog export determinism");
  ReliabilityCurve a = monte_carlo_curve(
      sys, 0.5, 1.0, 11, 50000, ReliabilityMode::MonteCarloGuarantee, 7);
  ReliabilityCurve b = monte_carlo_curve(
      sys, 0.5, 1.0, 11, 50000, ReliabilityMode::MonteCarloGuarantee, 7);
  require(a.to_csv() == b.to_csv(), "seeded Monte Carlo determinism");
  notes = "JSON round trips, byte-equal Verilog, byte-equal seeded curves";
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "function-module correctness (braun4 vs integer products)",
       criterion1_multiplier},
      {2, "voter correctness (majority and 3-of-m tables, worked scenarios)",
       criterion2_voters},
      {3, "masking guarantees verified exhaustively (adversarial)",
       criterion3_guarantees},
      {4, "tightness counterexamples beyond the guarantee", criterion4_tightness},
      {5, "published dataset reductions reproduced", criterion5_dataset},
      {6, "structural area/ADP trends under the neutral model",
       criterion6_trends},
      {7, "reliability: analytic vs enumeration vs Monte Carlo",
       criterion7_reliability},
      {8, "round-trip and determinism", criterion8_determinism},
  };

  int failures = 0;
  for (auto& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string notes;
    bool ok = true;
    std::string why;
    try {
      criterion.body(notes);
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    double elapsed = seconds_since(start);
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%6.2f s", elapsed);
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number
              << " (" << timing << "): " << criterion.title;
    if (ok && !notes.empty()) std::cout << " — " << notes;
    if (!ok) std::cout << " — " << why;
    std::cout << std::endl;
    if (!ok) ++failures;
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                              : std::to_string(failures) + " CRITERIA FAILED")
            << std::endl;
  return failures;
}
