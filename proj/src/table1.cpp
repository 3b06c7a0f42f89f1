#include "redundis/table1.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "redundis/netlist.hpp"  // Error

namespace redundis {

std::string table1_fixture_csv() {
  return
      "family,process,type,scheme,delay_ns,area_bels,adp\n"
      "Spartan 3E,90nm,Commercial,5MR,13.056,187,2441.472\n"
      "Spartan 3E,90nm,Commercial,7MR,16.550,327,5411.85\n"
      "Spartan 3E,90nm,Commercial,9MR,16.493,460,7586.78\n"
      "Spartan 3E,90nm,Commercial,3-of-5 DMMR,13.794,179,2469.126\n"
      "Spartan 3E,90nm,Commercial,3-of-6 DMMR,13.949,211,2943.239\n"
      "Spartan 3E,90nm,Commercial,3-of-7 DMMR,13.721,246,3375.366\n"
      "Virtex 5,65nm,Commercial,5MR,6.953,107,743.971\n"
      "Virtex 5,65nm,Commercial,7MR,7.149,162,1158.138\n"
      "Virtex 5,65nm,Commercial,9MR,7.990,248,1981.52\n"
      "Virtex 5,65nm,Commercial,3-of-5 DMMR,7.352,109,801.368\n"
      "Virtex 5,65nm,Commercial,3-of-6 DMMR,6.957,129,897.453\n"
      "Virtex 5,65nm,Commercial,3-of-7 DMMR,7.999,154,1231.846\n"
      "QPro Virtex 2,150nm,Radiation tolerant,5MR,16.156,187,3021.172\n"
      "QPro Virtex 2,150nm,Radiation tolerant,7MR,20.056,327,6558.312\n"
      "QPro Virtex 2,150nm,Radiation tolerant,9MR,20.208,460,9295.68\n"
      "QPro Virtex 2,150nm,Radiation tolerant,3-of-5 DMMR,16.701,179,2989.479\n"
      "QPro Virtex 2,150nm,Radiation tolerant,3-of-6 DMMR,16.712,211,3526.232\n"
      "QPro Virtex 2,150nm,Radiation tolerant,3-of-7 DMMR,16.504,246,4059.984\n"
      "QPro Virtex E,180nm,Military grade,5MR,18.937,187,3541.219\n"
      "QPro Virtex E,180nm,Military grade,7MR,23.901,327,7815.627\n"
      // the 9MR area prints as 478 BELs for this family (460 elsewhere);
      // stored as printed
      "QPro Virtex E,180nm,Military grade,9MR,25.934,478,12396.452\n"
      "QPro Virtex E,180nm,Military grade,3-of-5 DMMR,19.713,179,3528.627\n"
      "QPro Virtex E,180nm,Military grade,3-of-6 DMMR,20.195,211,4261.145\n"
      "QPro Virtex E,180nm,Military grade,3-of-7 DMMR,20.030,246,4927.38\n";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_number(const std::string& s, int line_no, const char* what) {
  try {
    size_t consumed = 0;
    double v = std::stod(s, &consumed);
    if (consumed != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("table1 fixture line " + std::to_string(line_no) + ": bad " +
                what + " value '" + s + "'");
  }
}

}  // namespace

std::vector<Table1Row> parse_table1_csv(const std::string& csv_text) {
  std::istringstream is(csv_text);
  std::string line;
  std::vector<Table1Row> rows;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != "family,process,type,scheme,delay_ns,area_bels,adp") {
        throw Error("table1 fixture: unexpected header '" + line + "'");
      }
      saw_header = true;
      continue;
    }
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 7) {
      throw Error("table1 fixture line " + std::to_string(line_no) +
                  ": expected 7 fields, got " + std::to_string(f.size()));
    }
    Table1Row row;
    row.family = f[0];
    row.process = f[1];
    row.type = f[2];
    row.scheme = f[3];
    row.delay_ns = parse_number(f[4], line_no, "delay_ns");
    row.area_bels = parse_number(f[5], line_no, "area_bels");
    row.adp = parse_number(f[6], line_no, "adp");
    rows.push_back(std::move(row));
  }
  if (!saw_header) throw Error("table1 fixture: missing header line");
  return rows;
}

namespace {

const Table1Row& find_row(const std::vector<Table1Row>& rows,
                          const std::string& family,
                          const std::string& scheme) {
  for (const auto& row : rows) {
    if (row.family == family && row.scheme == scheme) return row;
  }
  throw Error("table1 fixture: no row for family '" + family +
              "', scheme '" + scheme + "'");
}

double reduction_percent(double baseline, double candidate) {
  return (baseline - candidate) / baseline * 100.0;
}

}  // namespace

Table1Summary table1_reductions(const std::vector<Table1Row>& rows) {
  // preserve first-appearance family order
  std::vector<std::pair<std::string, std::string>> families;
  for (const auto& row : rows) {
    bool known = false;
    for (const auto& [name, type] : families) {
      (void)type;
      if (name == row.family) known = true;
    }
    if (!known) families.emplace_back(row.family, row.type);
  }

  Table1Summary s;
  double com_sum_76 = 0, com_sum_97 = 0, rm_sum_76 = 0, rm_sum_97 = 0;
  int com_n = 0, rm_n = 0;
  for (const auto& [family, type] : families) {
    FamilyReduction fr;
    fr.family = family;
    fr.type = type;
    fr.reduction_7mr_vs_3of6 = reduction_percent(
        find_row(rows, family, "7MR").adp,
        find_row(rows, family, "3-of-6 DMMR").adp);
    fr.reduction_9mr_vs_3of7 = reduction_percent(
        find_row(rows, family, "9MR").adp,
        find_row(rows, family, "3-of-7 DMMR").adp);
    if (type == "Commercial") {
      com_sum_76 += fr.reduction_7mr_vs_3of6;
      com_sum_97 += fr.reduction_9mr_vs_3of7;
      ++com_n;
    } else {
      rm_sum_76 += fr.reduction_7mr_vs_3of6;
      rm_sum_97 += fr.reduction_9mr_vs_3of7;
      ++rm_n;
    }
    s.per_family.push_back(std::move(fr));
  }
  if (com_n == 0 || rm_n == 0) {
    throw Error("table1 fixture: need both commercial and radiation/military "
                "families");
  }
  s.commercial_avg_7v6 = com_sum_76 / com_n;
  s.commercial_avg_9v7 = com_sum_97 / com_n;
  s.radmil_avg_7v6 = rm_sum_76 / rm_n;
  s.radmil_avg_9v7 = rm_sum_97 / rm_n;
  s.four_family_mean_7v6 = (com_sum_76 + rm_sum_76) / (com_n + rm_n);
  s.four_family_mean_9v7 = (com_sum_97 + rm_sum_97) / (com_n + rm_n);
  s.pair_average_mean_7v6 = (s.commercial_avg_7v6 + s.radmil_avg_7v6) / 2.0;
  s.pair_average_mean_9v7 = (s.commercial_avg_9v7 + s.radmil_avg_9v7) / 2.0;
  s.quoted_matches_computed_7v6 =
      std::fabs(s.quoted_overall_7v6 - s.four_family_mean_7v6) <= 0.5;
  s.quoted_matches_computed_9v7 =
      std::fabs(s.quoted_overall_9v7 - s.four_family_mean_9v7) <= 0.5;
  for (const auto& row : rows) {
    s.max_adp_recomputation_error =
        std::max(s.max_adp_recomputation_error,
                 std::fabs(row.adp - row.delay_ns * row.area_bels));
  }
  return s;
}

std::string Table1Summary::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json fams = nlohmann::ordered_json::array();
  for (const auto& fr : per_family) {
    fams.push_back({{"family", fr.family},
                    {"type", fr.type},
                    {"adp_reduction_7mr_vs_3of6", fr.reduction_7mr_vs_3of6},
                    {"adp_reduction_9mr_vs_3of7", fr.reduction_9mr_vs_3of7}});
  }
  j["per_family"] = std::move(fams);
  j["commercial_pair_avg"] = {{"7mr_vs_3of6", commercial_avg_7v6},
                              {"9mr_vs_3of7", commercial_avg_9v7}};
  j["radiation_military_pair_avg"] = {{"7mr_vs_3of6", radmil_avg_7v6},
                                      {"9mr_vs_3of7", radmil_avg_9v7}};
  j["four_family_mean"] = {{"7mr_vs_3of6", four_family_mean_7v6},
                           {"9mr_vs_3of7", four_family_mean_9v7}};
  j["pair_average_mean"] = {{"7mr_vs_3of6", pair_average_mean_7v6},
                            {"9mr_vs_3of7", pair_average_mean_9v7}};
  j["quoted_overall"] = {{"7mr_vs_3of6", quoted_overall_7v6},
                         {"9mr_vs_3of7", quoted_overall_9v7}};
  j["quoted_matches_computed"] = {{"7mr_vs_3of6", quoted_matches_computed_7v6},
                                  {"9mr_vs_3of7", quoted_matches_computed_9v7}};
  j["max_adp_recomputation_error"] = max_adp_recomputation_error;
  return j.dump(2);
}

std::string Table1Summary::render_table() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "ADP reductions computed from the bundled synthesis dataset (%)\n";
  os << "  family               type                 7MR->3of6   9MR->3of7\n";
  for (const auto& fr : per_family) {
    os << "  " << std::left << std::setw(21) << fr.family << std::setw(21)
       << fr.type << std::right << std::setw(9) << fr.reduction_7mr_vs_3of6
       << "   " << std::setw(9) << fr.reduction_9mr_vs_3of7 << "\n";
  }
  auto line = [&os](const char* label, double a, double b) {
    os << "  " << std::left << std::setw(42) << label << std::right
       << std::setw(9) << a << "   " << std::setw(9) << b << "\n";
  };
  line("commercial pair average", commercial_avg_7v6, commercial_avg_9v7);
  line("radiation+military pair average", radmil_avg_7v6, radmil_avg_9v7);
  line("four-family mean", four_family_mean_7v6, four_family_mean_9v7);
  line("mean of pair averages", pair_average_mean_7v6, pair_average_mean_9v7);
  line("quoted overall average", quoted_overall_7v6, quoted_overall_9v7);
  if (!quoted_matches_computed_7v6 || !quoted_matches_computed_9v7) {
    os << "  NOTE: the quoted overall averages do not match any computed\n"
          "  aggregation above (difference exceeds 0.5 percentage points);\n"
          "  all variants are reported, none is singled out as intended.\n";
  }
  os << "  max |ADP - delay*area| across rows: " << std::setprecision(6)
     << max_adp_recomputation_error << "\n";
  os << "  absolute BEL/ns values are synthesis-tool outputs, reproduced as\n"
        "  fixture data only.\n";
  return os.str();
}

}  // namespace redundis
