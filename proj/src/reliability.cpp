#include "redundis/reliability.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "parallel.hpp"
#include "redundis/simulator.hpp"

namespace redundis {

std::string_view to_string(ReliabilityMode mode) {
  switch (mode) {
    case ReliabilityMode::Analytic: return "analytic";
    case ReliabilityMode::MonteCarloGuarantee: return "mc-guarantee";
    case ReliabilityMode::MonteCarloCircuit: return "mc-circuit";
  }
  return "?";
}

namespace {

void check_r(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error("module reliability r must lie in [0, 1]");
  }
}

double binomial_tail(int n, int k_min, double r) {
  // sum_{i=k_min}^{n} C(n,i) r^i (1-r)^(n-i), n small
  double total = 0.0;
  for (int i = k_min; i <= n; ++i) {
    double c = 1.0;
    for (int j = 0; j < i; ++j) c = c * (n - j) / (j + 1);
    total += c * std::pow(r, i) * std::pow(1.0 - r, n - i);
  }
  return total;
}

// failure mask: bit (replica-1) set means that replica failed this trial
bool mask_conforming(const RedundancyScheme& scheme, uint32_t mask) {
  if (scheme.kind == RedundancyScheme::Kind::Nmr) {
    return __builtin_popcount(mask) <= (scheme.size - 1) / 2;
  }
  int majority = __builtin_popcount(mask & 0b111u);
  int minority = __builtin_popcount(mask >> 3);
  return majority <= 1 && minority <= scheme.size - 4;
}

uint32_t draw_failure_mask(const RedundancyScheme& scheme, double r,
                           uint64_t seed, uint64_t point, uint64_t trial) {
  uint32_t mask = 0;
  for (int k = 0; k < scheme.replica_count(); ++k) {
    double u = keyed_u01(seed, point, trial,
                         static_cast<uint64_t>(k) + 1);
    if (!(u < r)) mask |= uint32_t{1} << k;
  }
  return mask;
}

// simulated verdict for one failure mask: (masked everywhere?, correct rows)
struct CircuitVerdict {
  bool success = false;
  uint64_t correct_rows = 0;
};

class CircuitScorer {
 public:
  CircuitScorer(const RedundantSystem& system, FaultKind fault)
      : system_(system), sys_(system.netlist), fault_(fault) {
    const int p = static_cast<int>(system.netlist.inputs.size());
    if (p > 16) {
      throw Error("circuit-mode reliability is guarded at 16 module inputs; '" +
                  system.golden_module.name + "' has " + std::to_string(p));
    }
    rows_ = uint64_t{1} << p;
    p_ = p;
    q_ = static_cast<int>(system.netlist.outputs.size());
    golden_ = truth_table(system.golden_module).rows;
  }

  uint64_t rows() const { return rows_; }

  CircuitVerdict score(uint32_t mask) {
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;

    CompiledNetlist::Actions actions = sys_.no_actions();
    for (int k = 0; k < system_.scheme.replica_count(); ++k) {
      if (!(mask & (uint32_t{1} << k))) continue;
      for (const auto& net : system_.module_output_nets[k]) {
        actions[sys_.net_index(net)] =
            static_cast<int8_t>(fault_ == FaultKind::Stuck0 ? 0
                                : fault_ == FaultKind::Stuck1 ? 1
                                                              : 2);
      }
    }
    std::vector<uint8_t> values(sys_.net_count(), 0);
    CircuitVerdict verdict;
    verdict.success = true;
    for (uint64_t row = 0; row < rows_; ++row) {
      for (int i = 0; i < p_; ++i) {
        values[sys_.input_nets()[i]] =
            static_cast<uint8_t>((row >> (p_ - 1 - i)) & 1);
      }
      sys_.evaluate(values, actions);
      uint64_t word = 0;
      for (int j = 0; j < q_; ++j) {
        word |= static_cast<uint64_t>(values[sys_.output_nets()[j]])
                << (q_ - 1 - j);
      }
      if (word == golden_[row]) {
        ++verdict.correct_rows;
      } else {
        verdict.success = false;
      }
    }
    cache_.emplace(mask, verdict);
    return verdict;
  }

 private:
  const RedundantSystem& system_;
  CompiledNetlist sys_;
  FaultKind fault_;
  int p_ = 0, q_ = 0;
  uint64_t rows_ = 0;
  std::vector<uint64_t> golden_;
  std::unordered_map<uint32_t, CircuitVerdict> cache_;
};

MonteCarloResult run_trials(const RedundantSystem& system, double r,
                            uint64_t trials, ReliabilityMode mode,
                            uint64_t seed, uint64_t point,
                            const MonteCarloOptions& options) {
  check_r(r);
  if (trials < 1) throw Error("monte carlo needs at least 1 trial");
  if (mode == ReliabilityMode::Analytic) {
    throw Error("analytic mode takes no trials; use analytic_reliability");
  }
  const RedundancyScheme& scheme = system.scheme;
  const int replicas = scheme.replica_count();
  if (replicas > 30) throw Error("too many replicas for mask-based trials");

  // tally how often each failure mask is drawn; per-trial draws are keyed by
  // (seed, point, trial, replica) so any partitioning gives the same tally
  const uint32_t mask_space = uint32_t{1} << replicas;
  std::vector<uint64_t> counts(mask_space, 0);
  int workers = worker_count(options.max_threads);
  std::vector<std::vector<uint64_t>> local(workers);
  parallel_chunks(trials, workers, [&](int chunk, uint64_t begin, uint64_t end) {
    std::vector<uint64_t>& mine = local[chunk];
    mine.assign(mask_space, 0);
    for (uint64_t t = begin; t < end; ++t) {
      ++mine[draw_failure_mask(scheme, r, seed, point, t)];
    }
  });
  for (const auto& mine : local) {
    if (mine.empty()) continue;
    for (uint32_t m = 0; m < mask_space; ++m) counts[m] += mine[m];
  }

  MonteCarloResult result;
  result.trials = trials;
  result.per_input_average = std::numeric_limits<double>::quiet_NaN();

  if (mode == ReliabilityMode::MonteCarloGuarantee) {
    for (uint32_t m = 0; m < mask_space; ++m) {
      if (counts[m] && mask_conforming(scheme, m)) result.successes += counts[m];
    }
  } else {
    CircuitScorer scorer(system, options.circuit_fault);
    uint64_t correct_rows_total = 0;
    for (uint32_t m = 0; m < mask_space; ++m) {
      if (!counts[m]) continue;
      CircuitVerdict verdict = scorer.score(m);
      if (verdict.success) result.successes += counts[m];
      correct_rows_total += counts[m] * verdict.correct_rows;
    }
    result.per_input_average =
        static_cast<double>(correct_rows_total) /
        (static_cast<double>(trials) * static_cast<double>(scorer.rows()));
  }

  result.r_hat = static_cast<double>(result.successes) /
                 static_cast<double>(trials);
  result.halfwidth = 1.96 * std::sqrt(result.r_hat * (1.0 - result.r_hat) /
                                      static_cast<double>(trials));
  return result;
}

std::vector<double> r_grid(double r_min, double r_max, int steps) {
  if (!(r_min >= 0.0 && r_max <= 1.0 && r_min < r_max)) {
    throw Error("reliability grid needs 0 <= r_min < r_max <= 1");
  }
  if (steps < 2) throw Error("reliability grid needs at least 2 steps");
  std::vector<double> grid(steps);
  for (int i = 0; i < steps; ++i) {
    grid[i] = r_min + (r_max - r_min) * i / (steps - 1);
  }
  grid.back() = r_max;
  return grid;
}

}  // namespace

double analytic_reliability(const RedundancyScheme& scheme, double r) {
  check_r(r);
  if (scheme.kind == RedundancyScheme::Kind::Nmr) {
    return binomial_tail(scheme.size, (scheme.size + 1) / 2, r);
  }
  double majority_up = 3.0 * r * r - 2.0 * r * r * r;
  double minority_up = 1.0 - std::pow(1.0 - r, scheme.size - 3);
  return majority_up * minority_up;
}

MonteCarloResult monte_carlo_reliability(const RedundantSystem& system,
                                         double r, uint64_t trials,
                                         ReliabilityMode mode, uint64_t seed,
                                         const MonteCarloOptions& options) {
  return run_trials(system, r, trials, mode, seed, /*point=*/0, options);
}

ReliabilityCurve analytic_curve(const RedundancyScheme& scheme, double r_min,
                                double r_max, int steps) {
  ReliabilityCurve curve;
  curve.scheme = scheme.to_string();
  curve.mode = ReliabilityMode::Analytic;
  for (double r : r_grid(r_min, r_max, steps)) {
    curve.samples.push_back({r, analytic_reliability(scheme, r), 0.0});
  }
  return curve;
}

ReliabilityCurve monte_carlo_curve(const RedundantSystem& system, double r_min,
                                   double r_max, int steps, uint64_t trials,
                                   ReliabilityMode mode, uint64_t seed,
                                   const MonteCarloOptions& options) {
  ReliabilityCurve curve;
  curve.scheme = system.scheme.to_string();
  curve.mode = mode;
  curve.seed = seed;
  curve.trials = trials;
  std::vector<double> grid = r_grid(r_min, r_max, steps);
  for (size_t i = 0; i < grid.size(); ++i) {
    MonteCarloResult mc =
        run_trials(system, grid[i], trials, mode, seed, i, options);
    curve.samples.push_back({grid[i], mc.r_hat, mc.halfwidth});
  }
  return curve;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

}  // namespace

std::string ReliabilityCurve::to_csv() const {
  std::ostringstream os;
  os << "# redundis reliability curve\n";
  os << "# scheme: " << scheme << "\n";
  os << "# mode: " << redundis::to_string(mode) << "\n";
  if (mode != ReliabilityMode::Analytic) {
    os << "# seed: " << seed << "\n";
    os << "# trials: " << trials << "\n";
  }
  os << "# assumption: modules fail independently with identical reliability "
        "r; voters fault-free\n";
  os << "r,R,halfwidth\n";
  for (const auto& s : samples) {
    os << fmt(s.r) << "," << fmt(s.reliability) << "," << fmt(s.halfwidth)
       << "\n";
  }
  return os.str();
}

std::string ReliabilityCurve::to_json() const {
  nlohmann::ordered_json j;
  j["scheme"] = scheme;
  j["mode"] = std::string(redundis::to_string(mode));
  if (mode != ReliabilityMode::Analytic) {
    j["seed"] = seed;
    j["trials"] = trials;
  }
  j["assumption"] =
      "modules fail independently with identical reliability r; voters "
      "fault-free";
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    arr.push_back({{"r", s.r}, {"R", s.reliability}, {"halfwidth", s.halfwidth}});
  }
  j["samples"] = std::move(arr);
  return j.dump(2);
}

}  // namespace redundis
