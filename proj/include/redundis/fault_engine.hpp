#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "redundis/redundancy.hpp"
#include "redundis/simulator.hpp"

namespace redundis {

// How a faulty replica's outputs misbehave. Faults are persistent: the same
// behavior holds across every input vector. Adversarial is never simulated
// directly; verification enumerates every output value a faulty replica
// could produce.
enum class FaultBehavior { Stuck0, Stuck1, Inverted, Adversarial };
std::string_view to_string(FaultBehavior behavior);

// Replica indices are 1-based, matching f1..fm voter inputs.
struct FaultPattern {
  std::vector<int> replicas;  // sorted, unique

  bool operator==(const FaultPattern&) const = default;
};

struct Counterexample {
  FaultPattern pattern;
  FaultBehavior behavior = FaultBehavior::Adversarial;
  uint64_t input_row = 0;  // row index in truth-table enumeration order
  int input_bits = 0;      // primary input count, for rendering input_row
  int output_bit = 0;      // position in the system's outputs list
  bool got = false;
  bool expected = false;
  // concrete overlay that replays the mismatch through evaluate()
  FaultOverlay overlay;

  std::string to_json() const;
};

struct MaskingVerdict {
  bool verified = false;
  uint64_t patterns_checked = 0;
  uint64_t inputs_per_pattern = 0;
  std::optional<Counterexample> counterexample;
};

// Per-bit adversarial enumeration requires the structural independence
// check; WholeVector enumerates all faulty output bits jointly (exponential,
// guarded). Auto picks per-bit when the check passes.
enum class AdversaryStrategy { Auto, PerBit, WholeVector };

struct VerifyOptions {
  AdversaryStrategy strategy = AdversaryStrategy::Auto;
  int max_threads = 0;  // 0 = automatic
};

// Fault patterns of the given size that the scheme promises to mask:
// NMR{n}: any subset of size <= (n-1)/2; DMMR{m}: at most 1 replica from
// {1,2,3} and at most m-4 from {4..m}. Lexicographic order.
std::vector<FaultPattern> conforming_patterns(const RedundancyScheme& scheme,
                                              int cardinality);
bool is_conforming(const RedundancyScheme& scheme, const FaultPattern& pattern);

// True when, for every system output bit j, the bit's structural input cone
// meets replica outputs only at the replicas' j-th output nets. This is
// what licenses per-bit adversarial enumeration.
bool bitwise_voting_independent(const RedundantSystem& system,
                                std::string* diagnostic = nullptr);

// Exhaustive over all primary inputs (guard: golden module has <= 16
// inputs). For Adversarial, additionally exhaustive over the faulty
// replicas' possible output values.
MaskingVerdict verify_masking(const RedundantSystem& system,
                              const FaultPattern& pattern,
                              FaultBehavior behavior,
                              const VerifyOptions& options = {});

// Runs verify_masking(Adversarial) over every conforming pattern of every
// cardinality from 1 up to the scheme's conditional_total.
MaskingVerdict verify_guarantee(const RedundantSystem& system,
                                const VerifyOptions& options = {});

// Searches the NON-conforming patterns of the given cardinality under
// Adversarial behavior; returns the first witness in (pattern, input, bit,
// assignment) order, or nothing if the system masks even these.
std::optional<Counterexample> find_counterexample(
    const RedundantSystem& system, int cardinality,
    const VerifyOptions& options = {});

}  // namespace redundis
