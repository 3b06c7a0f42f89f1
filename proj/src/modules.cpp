#include "redundis/modules.hpp"

#include <algorithm>
#include <cassert>

namespace redundis {

std::string_view to_string(VoterConstruction c) {
  return c == VoterConstruction::SumOfProducts ? "sum-of-products"
                                               : "count-compare";
}

namespace {

// Build-time value: a net, or a constant folded away before any gate is
// emitted. Netlists have no constant nets, so helpers fold eagerly.
struct Val {
  int constant = -1;  // -1: net, else 0/1
  std::string net;

  static Val c0() { return {0, {}}; }
  static Val c1() { return {1, {}}; }
  static Val wire(std::string n) { return {-1, std::move(n)}; }
  bool is_const() const { return constant >= 0; }
};

class Builder {
 public:
  explicit Builder(std::string name) { nl_.name = std::move(name); }

  Val input(const std::string& name) {
    nl_.inputs.push_back(name);
    return Val::wire(name);
  }

  void output(const std::string& name, Val v) {
    if (v.is_const()) {
      throw Error("module '" + nl_.name + "': output '" + name +
                  "' folded to a constant");
    }
    if (v.net != name && !rename_unread_net(v.net, name)) {
      emit(GateKind::Buf, {v}, name);
    }
    nl_.outputs.push_back(name);
  }

  // emits a gate driving `out` (fresh when empty)
  Val emit(GateKind kind, const std::vector<Val>& ins, std::string out = {}) {
    if (out.empty()) out = fresh("w");
    Gate g;
    g.id = "g" + std::to_string(counter_++);
    g.kind = kind;
    g.out = out;
    for (const Val& v : ins) {
      assert(!v.is_const());
      g.ins.push_back(v.net);
    }
    nl_.gates.push_back(std::move(g));
    return Val::wire(out);
  }

  std::string fresh(const std::string& hint) {
    return hint + std::to_string(counter_++);
  }

  Val band(Val a, Val b) {
    if (a.is_const()) return a.constant ? b : Val::c0();
    if (b.is_const()) return b.constant ? a : Val::c0();
    return emit(GateKind::And, {a, b});
  }
  Val bor(Val a, Val b) {
    if (a.is_const()) return a.constant ? Val::c1() : b;
    if (b.is_const()) return b.constant ? Val::c1() : a;
    return emit(GateKind::Or, {a, b});
  }
  Val bxor(Val a, Val b) {
    if (a.is_const()) return a.constant ? bnot(b) : b;
    if (b.is_const()) return b.constant ? bnot(a) : a;
    return emit(GateKind::Xor, {a, b});
  }
  Val bnot(Val a) {
    if (a.is_const()) return a.constant ? Val::c0() : Val::c1();
    return emit(GateKind::Not, {a});
  }

  Netlist take() { return std::move(nl_); }

 private:
  // Retargets the gate driving `net` to drive `name` instead. Only legal
  // while nothing reads `net`, i.e. for a just-created tree root.
  bool rename_unread_net(const std::string& net, const std::string& name) {
    for (const auto& g : nl_.gates) {
      for (const auto& in : g.ins) {
        if (in == net) return false;
      }
    }
    for (auto& g : nl_.gates) {
      if (g.out == net) {
        g.out = name;
        return true;
      }
    }
    return false;
  }

  Netlist nl_;
  int counter_ = 0;
};

// (sum, carry) pair used while assembling adder arrays
struct Cell {
  Val sum, carry;
};

}  // namespace

Netlist half_adder() {
  Netlist nl;
  nl.name = "halfadder";
  nl.inputs = {"a", "b"};
  nl.outputs = {"sum", "carry"};
  nl.gates = {
      {"x0", GateKind::Xor, {"a", "b"}, "sum"},
      {"n0", GateKind::And, {"a", "b"}, "carry"},
  };
  return nl;
}

Netlist full_adder() {
  Netlist nl;
  nl.name = "fulladder";
  nl.inputs = {"a", "b", "cin"};
  nl.outputs = {"sum", "carry"};
  nl.gates = {
      {"x0", GateKind::Xor, {"a", "b"}, "axb"},
      {"x1", GateKind::Xor, {"axb", "cin"}, "sum"},
      {"n0", GateKind::And, {"a", "b"}, "ab"},
      {"n1", GateKind::And, {"axb", "cin"}, "t"},
      {"o0", GateKind::Or, {"ab", "t"}, "carry"},
  };
  return nl;
}

namespace {

// adds a half/full adder instance to `parent`
Cell add_cell(Netlist& parent, const std::string& prefix,
              const std::vector<std::string>& addends,
              const std::string& sum_net, const std::string& carry_net) {
  PortBinding binding;
  const Netlist cell = addends.size() == 3 ? full_adder() : half_adder();
  binding["a"] = addends[0];
  binding["b"] = addends[1];
  if (addends.size() == 3) binding["cin"] = addends[2];
  binding["sum"] = sum_net;
  binding["carry"] = carry_net;
  parent = instantiate(parent, cell, binding, prefix);
  return {Val::wire(sum_net), Val::wire(carry_net)};
}

}  // namespace

Netlist braun_multiplier(int width) {
  if (width < 2) {
    throw Error("braun_multiplier: width must be >= 2, got " +
                std::to_string(width));
  }
  const int w = width;
  Netlist nl;
  nl.name = "braun" + std::to_string(w);
  for (int i = w - 1; i >= 0; --i) nl.inputs.push_back("a" + std::to_string(i));
  for (int i = w - 1; i >= 0; --i) nl.inputs.push_back("b" + std::to_string(i));
  for (int k = 2 * w - 1; k >= 0; --k)
    nl.outputs.push_back("p" + std::to_string(k));

  auto pnet = [](int k) { return "p" + std::to_string(k); };

  // partial products; pp[0][0] is product bit 0 directly
  std::vector<std::vector<std::string>> pp(w, std::vector<std::string>(w));
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j < w; ++j) {
      std::string net = (i == 0 && j == 0)
                            ? pnet(0)
                            : "pp_" + std::to_string(i) + "_" + std::to_string(j);
      nl.gates.push_back({"g_pp_" + std::to_string(i) + "_" + std::to_string(j),
                          GateKind::And,
                          {"a" + std::to_string(j), "b" + std::to_string(i)},
                          net});
      pp[i][j] = net;
    }
  }

  // Row-by-row accumulation. Before row i, `acc[j]` holds the surviving sum
  // bit of weight i+j; each row adds its partial products and emits product
  // bit i from its first cell. The last row writes the p nets directly.
  std::vector<std::string> acc(pp[0].begin() + 1, pp[0].end());
  for (int i = 1; i < w; ++i) {
    const bool last = i == w - 1;
    auto sum_net = [&](int weight, int j) {
      return last ? pnet(weight)
                  : "s_" + std::to_string(i) + "_" + std::to_string(j);
    };
    auto carry_net = [&](int j) {
      return (last && j == w - 1)
                 ? pnet(i + w)
                 : "c_" + std::to_string(i) + "_" + std::to_string(j);
    };
    std::vector<std::string> next;
    std::string carry;
    for (int j = 0; j < w; ++j) {
      std::string prefix =
          "ad_" + std::to_string(i) + "_" + std::to_string(j) + "_";
      std::vector<std::string> addends;
      if (j < static_cast<int>(acc.size())) addends.push_back(acc[j]);
      addends.push_back(pp[i][j]);
      if (!carry.empty()) addends.push_back(carry);
      std::string sum = j == 0 ? pnet(i) : sum_net(i + j, j);
      Cell cell = add_cell(nl, prefix, addends, sum, carry_net(j));
      carry = cell.carry.net;
      if (j > 0) next.push_back(sum);
    }
    next.push_back(carry);  // top bit of this row, weight i + w
    acc = std::move(next);
  }
  return nl;
}

VoterConstruction default_voter_construction(int n) {
  return n <= 5 ? VoterConstruction::SumOfProducts
                : VoterConstruction::CountCompare;
}

namespace {

void check_voter_n(int n) {
  if (n < 3 || n > 15 || n % 2 == 0) {
    throw Error("majority_voter: n must be odd and within [3, 15], got " +
                std::to_string(n));
  }
}

// every k-subset of {0..n-1} in lexicographic order
std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> result;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    result.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return result;
}

Netlist majority_sop(int n) {
  Builder b("maj" + std::to_string(n) + "_sop");
  std::vector<Val> f;
  for (int i = 1; i <= n; ++i) f.push_back(b.input("f" + std::to_string(i)));
  const int t = (n + 1) / 2;
  std::vector<Val> terms;
  for (const auto& subset : combinations(n, t)) {
    std::vector<Val> ins;
    for (int i : subset) ins.push_back(f[i]);
    terms.push_back(b.emit(GateKind::And, ins));
  }
  Val y = terms.size() == 1 ? terms[0] : b.emit(GateKind::Or, terms);
  b.output("y", y);
  return b.take();
}

// ripple-adds two little-endian bit vectors
std::vector<Val> add_vectors(Builder& b, std::vector<Val> x,
                             std::vector<Val> y) {
  if (x.size() < y.size()) std::swap(x, y);
  std::vector<Val> out;
  Val carry = Val::c0();
  for (size_t i = 0; i < x.size(); ++i) {
    Val yi = i < y.size() ? y[i] : Val::c0();
    // full add of (x[i], yi, carry) with constant folding via xor/and/or
    Val axb = b.bxor(x[i], yi);
    Val sum = b.bxor(axb, carry);
    Val c = b.bor(b.band(x[i], yi), b.band(axb, carry));
    out.push_back(sum);
    carry = c;
  }
  out.push_back(carry);
  while (out.size() > 1 && out.back().is_const() && out.back().constant == 0) {
    out.pop_back();
  }
  return out;
}

// little-endian popcount of n single-bit values
std::vector<Val> popcount(Builder& b, const std::vector<Val>& bits) {
  if (bits.size() == 1) return {bits[0]};
  if (bits.size() == 2) {
    return {b.bxor(bits[0], bits[1]), b.band(bits[0], bits[1])};
  }
  if (bits.size() == 3) {
    Val axb = b.bxor(bits[0], bits[1]);
    Val sum = b.bxor(axb, bits[2]);
    Val carry = b.bor(b.band(bits[0], bits[1]), b.band(axb, bits[2]));
    return {sum, carry};
  }
  size_t half = bits.size() / 2;
  std::vector<Val> lo(bits.begin(), bits.begin() + half);
  std::vector<Val> hi(bits.begin() + half, bits.end());
  return add_vectors(b, popcount(b, lo), popcount(b, hi));
}

// count >= threshold, folding the constant threshold bit by bit (MSB first)
Val compare_ge(Builder& b, const std::vector<Val>& count, int threshold) {
  Val gt = Val::c0();
  Val eq = Val::c1();
  for (int i = static_cast<int>(count.size()) - 1; i >= 0; --i) {
    bool tbit = (threshold >> i) & 1;
    if (tbit) {
      eq = b.band(eq, count[i]);
    } else {
      gt = b.bor(gt, b.band(eq, count[i]));
      eq = b.band(eq, b.bnot(count[i]));
    }
  }
  return b.bor(gt, eq);
}

Netlist majority_count_compare(int n) {
  Builder b("maj" + std::to_string(n) + "_cc");
  std::vector<Val> f;
  for (int i = 1; i <= n; ++i) f.push_back(b.input("f" + std::to_string(i)));
  std::vector<Val> count = popcount(b, f);
  Val y = compare_ge(b, count, (n + 1) / 2);
  b.output("y", y);
  return b.take();
}

}  // namespace

Netlist majority_voter(int n, VoterConstruction construction) {
  check_voter_n(n);
  return construction == VoterConstruction::SumOfProducts
             ? majority_sop(n)
             : majority_count_compare(n);
}

Netlist majority_voter(int n) {
  check_voter_n(n);
  return majority_voter(n, default_voter_construction(n));
}

Netlist dmmr_voter(int m) {
  if (m < 5) {
    throw Error("dmmr_voter: m must be >= 5 (3-of-5 is the smallest form), "
                "got " + std::to_string(m));
  }
  Netlist nl;
  nl.name = "dmmrv" + std::to_string(m);
  for (int i = 1; i <= m; ++i) nl.inputs.push_back("f" + std::to_string(i));
  nl.outputs = {"DMMRO"};
  // 2-of-3 majority over the majority group
  nl.gates.push_back({"maj_and0", GateKind::And, {"f1", "f2"}, "m01"});
  nl.gates.push_back({"maj_and1", GateKind::And, {"f1", "f3"}, "m02"});
  nl.gates.push_back({"maj_and2", GateKind::And, {"f2", "f3"}, "m12"});
  nl.gates.push_back({"maj_or", GateKind::Or, {"m01", "m02", "m12"}, "MAJ"});
  // wide OR over the minority group
  std::vector<std::string> minority;
  for (int i = 4; i <= m; ++i) minority.push_back("f" + std::to_string(i));
  nl.gates.push_back({"min_or", GateKind::Or, minority, "MIN"});
  nl.gates.push_back({"out_and", GateKind::And, {"MAJ", "MIN"}, "DMMRO"});
  return nl;
}

ModuleSpec spec_of(const Netlist& module) {
  ModuleSpec spec;
  spec.name = module.name;
  spec.input_widths = {static_cast<int>(module.inputs.size())};
  spec.output_width = static_cast<int>(module.outputs.size());
  return spec;
}

}  // namespace redundis
