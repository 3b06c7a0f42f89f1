#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redundis/fault_engine.hpp"
#include "redundis/redundancy.hpp"

namespace redundis {

// Modules fail independently, each with identical reliability r; voters are
// assumed fault-free. Guarantee mode scores a trial by budget conformity of
// the drawn failure pattern; Circuit mode simulates the failed system and
// scores by actual output correctness, so it can only be more optimistic.
enum class ReliabilityMode { Analytic, MonteCarloGuarantee, MonteCarloCircuit };
std::string_view to_string(ReliabilityMode mode);

// NMR{n}: P(at least (n+1)/2 of n modules up).
// DMMR{m}: P(at least 2 of first 3 up) * P(at least 1 of last m-3 up)
//        = (3r^2 - 2r^3) * (1 - (1-r)^(m-3)).
double analytic_reliability(const RedundancyScheme& scheme, double r);

struct MonteCarloResult {
  double r_hat = 0.0;
  double halfwidth = 0.0;  // 95% normal-approximation half width
  uint64_t trials = 0;
  uint64_t successes = 0;
  // Circuit mode only: average fraction of inputs answered correctly per
  // trial (success itself demands correctness on ALL inputs). NaN otherwise.
  double per_input_average = 0.0;
};

struct MonteCarloOptions {
  FaultKind circuit_fault = FaultKind::Invert;
  int max_threads = 0;
};

// Deterministic for a fixed seed regardless of thread count (counter-based
// per-trial draws). Circuit mode is guarded at 16 module inputs.
MonteCarloResult monte_carlo_reliability(const RedundantSystem& system,
                                         double r, uint64_t trials,
                                         ReliabilityMode mode, uint64_t seed,
                                         const MonteCarloOptions& options = {});

struct ReliabilitySample {
  double r = 0.0;
  double reliability = 0.0;
  double halfwidth = 0.0;  // 0 for analytic points
};

struct ReliabilityCurve {
  std::string scheme;
  ReliabilityMode mode = ReliabilityMode::Analytic;
  uint64_t seed = 0;    // MC modes only
  uint64_t trials = 0;  // MC modes only
  std::vector<ReliabilitySample> samples;  // r strictly increasing

  // header comments carry scheme/mode/seed/assumptions, then r,R,halfwidth
  std::string to_csv() const;
  std::string to_json() const;
};

// Evenly spaced r grid including both endpoints; steps >= 2.
ReliabilityCurve analytic_curve(const RedundancyScheme& scheme, double r_min,
                                double r_max, int steps);
ReliabilityCurve monte_carlo_curve(const RedundantSystem& system, double r_min,
                                   double r_max, int steps, uint64_t trials,
                                   ReliabilityMode mode, uint64_t seed,
                                   const MonteCarloOptions& options = {});

}  // namespace redundis
