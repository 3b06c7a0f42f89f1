#pragma once

#include <string>
#include <vector>

namespace redundis {

// One row of the bundled reference dataset: FPGA synthesis results (critical
// path delay in ns, area in BELs, and their product) for 5MR/7MR/9MR and
// 3-of-5/6/7 DMMR systems built around a 4x4 array multiplier, across four
// Xilinx families. Values are transcribed verbatim from the published table;
// they are device- and tool-specific and are shipped as data only.
struct Table1Row {
  std::string family;
  std::string process;
  std::string type;  // "Commercial", "Radiation tolerant", "Military grade"
  std::string scheme;
  double delay_ns = 0.0;
  double area_bels = 0.0;
  double adp = 0.0;
};

// CSV with header: family,process,type,scheme,delay_ns,area_bels,adp
std::string table1_fixture_csv();
std::vector<Table1Row> parse_table1_csv(const std::string& csv_text);

struct FamilyReduction {
  std::string family;
  std::string type;
  double reduction_7mr_vs_3of6 = 0.0;  // percent
  double reduction_9mr_vs_3of7 = 0.0;
};

// ADP reduction percentages computed from the dataset, aggregated every
// reasonable way. The dataset's own headline overall averages (44.5% and
// 56.5%) do not equal the arithmetic mean of the per-family reductions; the
// summary reports all variants and flags the difference rather than picking
// one reading.
struct Table1Summary {
  std::vector<FamilyReduction> per_family;
  double commercial_avg_7v6 = 0.0;
  double radmil_avg_7v6 = 0.0;
  double commercial_avg_9v7 = 0.0;
  double radmil_avg_9v7 = 0.0;
  double four_family_mean_7v6 = 0.0;
  double four_family_mean_9v7 = 0.0;
  double pair_average_mean_7v6 = 0.0;  // mean of the two pair averages
  double pair_average_mean_9v7 = 0.0;
  double quoted_overall_7v6 = 44.5;  // headline averages quoted with the data
  double quoted_overall_9v7 = 56.5;
  bool quoted_matches_computed_7v6 = false;  // within 0.5 percentage points
  bool quoted_matches_computed_9v7 = false;
  double max_adp_recomputation_error = 0.0;  // max |adp - delay*area|

  std::string to_json() const;
  std::string render_table() const;
};

Table1Summary table1_reductions(const std::vector<Table1Row>& rows);

}  // namespace redundis
