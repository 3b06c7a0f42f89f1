#pragma once

#include <string>
#include <vector>

#include "redundis/netlist.hpp"

namespace redundis {

enum class VoterConstruction { SumOfProducts, CountCompare };
std::string_view to_string(VoterConstruction c);

struct ModuleSpec {
  std::string name;
  std::vector<int> input_widths;
  int output_width = 0;
  std::string params;
};

// sum = a ^ b, carry = a & b; ports (a, b) -> (sum, carry)
Netlist half_adder();

// sum = a ^ b ^ cin, carry = majority(a, b, cin); ports (a, b, cin) ->
// (sum, carry)
Netlist full_adder();

// Unsigned array multiplier: AND partial-product array reduced by rows of
// half/full adders. Inputs a{w-1}..a0, b{w-1}..b0 (MSB first), outputs
// p{2w-1}..p0. width >= 2.
Netlist braun_multiplier(int width);

// SumOfProducts for n <= 5, CountCompare above.
VoterConstruction default_voter_construction(int n);

// n-input 1-output threshold circuit: output 1 iff at least (n+1)/2 inputs
// are 1. n odd, 3 <= n <= 15. Inputs f1..fn, output y.
// SumOfProducts: one AND per (n+1)/2-subset feeding a wide OR (n=3 gives the
// classic 3 AND2 + OR3 shape). CountCompare: adder-tree popcount feeding a
// >= threshold comparator.
Netlist majority_voter(int n, VoterConstruction construction);
Netlist majority_voter(int n);

// 3-of-m voter: inputs f1..fm; net MAJ = 2-of-3 majority of f1..f3, net MIN
// = f4 | ... | fm, output DMMRO = MAJ & MIN. m >= 5.
Netlist dmmr_voter(int m);

ModuleSpec spec_of(const Netlist& module);

}  // namespace redundis
