#include "citestat/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "citestat/errors.hpp"
#include "text_util.hpp"

namespace citestat {
namespace {

std::string_view dimension_label(GroupBy g) {
  switch (g) {
    case GroupBy::All: return "";
    case GroupBy::Region: return "Region";
    case GroupBy::Gender: return "Gender";
    case GroupBy::Cohort: return "Year of first publication";
  }
  return "";
}

SummaryStats scaled(SummaryStats s, double factor) {
  s.mean *= factor;
  if (s.sd) *s.sd *= factor;
  s.median *= factor;
  s.q1 *= factor;
  s.q3 *= factor;
  return s;
}

std::string trimmed_one_decimal(double v, bool trim) {
  std::string s = format_fixed(v, 1);
  if (trim && s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) s.resize(s.size() - 2);
  return s;
}

struct Table2Line {
  std::string_view dimension;
  std::string_view label;
  std::string_view term;
};

constexpr Table2Line kTable2Lines[] = {
    {"H-indices", "H-index", "h"},
    {"", "(H-index)^2/100", "h2_100"},
    {"Country of affiliation", "United Kingdom", "uk"},
    {"", "Other Europe", "other_europe"},
    {"", "Australia / NZ", "australia_nz"},
    {"", "Other", "other"},
    {"Gender", "Male", "male"},
    {"", "Authors per cited paper", "mean_authors"},
    {"", "Constant", "intercept"},
};

struct Cells {
  std::string coef;
  std::string ame;
};

Cells model_cells(const ModelSummary* m, std::string_view term) {
  if (m == nullptr) return {};
  const auto& names = m->fit.column_names;
  const auto it = std::find(names.begin(), names.end(), term);
  if (it == names.end()) return {};
  const auto j = static_cast<std::size_t>(it - names.begin());
  const double se = std::sqrt(std::max(0.0, m->fit.robust_cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j))));
  Cells c;
  c.coef = format_coefficient_cell(m->fit.beta[static_cast<Eigen::Index>(j)], se, m->wald[j].stars);
  if (m->ame[j]) c.ame = format_fixed(*m->ame[j], 3);
  return c;
}

}  // namespace

BoxStats boxplot_stats(std::span<const double> values, QuantileMethod method) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "box plot of empty data");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats b;
  b.n = sorted.size();
  b.median = quantile_sorted(sorted, 0.5, method);
  b.q1 = quantile_sorted(sorted, 0.25, method);
  b.q3 = quantile_sorted(sorted, 0.75, method);
  const double iqr = b.q3 - b.q1;
  const double low_fence = b.q1 - 1.5 * iqr;
  const double high_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double v : sorted) {
    if (v < low_fence || v > high_fence) {
      b.outliers.push_back(v);
    } else {
      b.whisker_low = std::min(b.whisker_low, v);
      b.whisker_high = std::max(b.whisker_high, v);
    }
  }
  return b;
}

std::vector<Table1Row> table1_rows(std::span<const AnalysisRecord> records, QuantileMethod method) {
  std::vector<Table1Row> rows;
  for (GroupBy g : {GroupBy::Region, GroupBy::Gender, GroupBy::Cohort}) {
    const auto h = group_describe(records, g, StatField::HIndex, method);
    const auto s = group_describe(records, g, StatField::SelfProp, method);
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].dimension == GroupBy::All && !rows.empty()) continue;
      rows.push_back({h[i].dimension, h[i].label, h[i].stats, s[i].stats});
    }
  }
  return rows;
}

std::string format_fixed(double value, int decimals) {
  std::string s = fmt::format("{:.{}f}", value, decimals);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_mean_sd(double mean, const std::optional<double>& sd) {
  return format_fixed(mean, 1) + "(" + (sd ? format_fixed(*sd, 1) : std::string("NA")) + ")";
}

std::string format_median_iqr(double median, double q1, double q3, bool trim_integral) {
  return trimmed_one_decimal(median, trim_integral) + "(" + trimmed_one_decimal(q1, trim_integral) + "-" +
         trimmed_one_decimal(q3, trim_integral) + ")";
}

std::string format_coefficient_cell(double coefficient, double standard_error, const std::string& stars) {
  return format_fixed(coefficient, 3) + "(" + format_fixed(standard_error, 3) + ")" + stars;
}

RenderedTable render_table1(std::span<const Table1Row> rows) {
  RenderedTable t;
  t.markdown =
      "# Sample description\n\n"
      "| Dimension | Group | N | H-index Mean(SD) | H-index Median(IQR) | Self-citation % Mean(SD) | "
      "Self-citation % Median(IQR) |\n"
      "|---|---|---:|---|---|---|---|\n";
  t.csv = "dimension,group,n,h_mean_sd,h_median_iqr,self_pct_mean_sd,self_pct_median_iqr\n";
  GroupBy previous = GroupBy::All;
  bool first = true;
  for (const auto& r : rows) {
    const auto pct = scaled(r.self_prop, 100.0);
    const std::string dim = (first || r.dimension != previous) ? std::string(dimension_label(r.dimension)) : "";
    first = false;
    previous = r.dimension;
    const std::string cells[4] = {
        format_mean_sd(r.h_index.mean, r.h_index.sd),
        format_median_iqr(r.h_index.median, r.h_index.q1, r.h_index.q3, true),
        format_mean_sd(pct.mean, pct.sd),
        format_median_iqr(pct.median, pct.q1, pct.q3, false),
    };
    t.markdown += fmt::format("| {} | {} | {} | {} | {} | {} | {} |\n", dim, r.label, r.h_index.n, cells[0],
                              cells[1], cells[2], cells[3]);
    t.csv += fmt::format("{},{},{},{},{},{},{}\n", detail::csv_field(dimension_label(r.dimension)),
                         detail::csv_field(r.label), r.h_index.n, cells[0], cells[1], cells[2], cells[3]);
  }

  std::vector<std::string> omitted;
  auto note_missing = [&](GroupBy dim, const auto& groups) {
    for (const auto g : groups) {
      const auto label = display_label(g);
      if (label == "Unknown") continue;
      const bool present = std::any_of(rows.begin(), rows.end(),
                                       [&](const Table1Row& r) { return r.dimension == dim && r.label == label; });
      if (!present) omitted.push_back(std::string(label) + " (" + std::string(dimension_label(dim)) + ")");
    }
  };
  note_missing(GroupBy::Region, kAllRegions);
  note_missing(GroupBy::Gender, kAllGenders);
  note_missing(GroupBy::Cohort, kAllCohorts);
  if (!omitted.empty()) {
    std::string list;
    for (const auto& o : omitted) list += (list.empty() ? "" : ", ") + o;
    t.markdown += "\nEmpty groups omitted: " + list + "\n";
  }
  return t;
}

RenderedTable render_table2(const ModelSummary* model1, const ModelSummary* model2) {
  RenderedTable t;
  t.markdown = "# Regression analysis\n\n";
  for (const ModelSummary* m : {model1, model2}) {
    if (m != nullptr && !m->fit.converged) {
      t.markdown += fmt::format("> WARNING: {} did not converge after {} iterations; estimates are unreliable.\n\n",
                                m->variant == ModelVariant::Model1 ? "Model 1" : "Model 2", m->fit.iterations);
    }
  }
  t.markdown +=
      "| Dimension | Independent variable | Model 1 Coefficient (robust SE) | Model 1 Marginal effect | "
      "Model 2 Coefficient (robust SE) | Model 2 Marginal effect |\n"
      "|---|---|---|---|---|---|\n";
  t.csv = "dimension,variable,model1_coef_se,model1_ame,model2_coef_se,model2_ame\n";
  for (const auto& line : kTable2Lines) {
    const Cells a = model_cells(model1, line.term);
    const Cells b = model_cells(model2, line.term);
    t.markdown += fmt::format("| {} | {} | {} | {} | {} | {} |\n", line.dimension, line.label, a.coef, a.ame,
                              b.coef, b.ame);
    t.csv += fmt::format("{},{},{},{},{},{}\n", detail::csv_field(line.dimension), detail::csv_field(line.label),
                         a.coef, a.ame, b.coef, b.ame);
  }
  auto n_of = [](const ModelSummary* m) { return m ? std::to_string(m->fit.n_obs()) : std::string(); };
  t.markdown += fmt::format("| | Observations | {} | | {} | |\n", n_of(model1), n_of(model2));
  t.csv += fmt::format(",Observations,{},,{},\n", n_of(model1), n_of(model2));
  t.markdown += "\n";
  t.markdown += kSignificanceFootnote;
  t.markdown += "\n";
  return t;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw Error(ErrorCode::Io, "error while writing '" + path.string() + "'");
}

}  // namespace citestat
