#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "citestat/errors.hpp"
#include "citestat/generator.hpp"
#include "citestat/report.hpp"

using citestat::boxplot_stats;

namespace {

// Tag-balance check: every element closes in order, attributes are quoted,
// and nothing but whitespace surrounds the root element.
bool well_formed_xml(const std::string& doc, std::string* why) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  int roots = 0;
  while (i < doc.size()) {
    if (doc[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(doc[i]))) {
        *why = "text outside root";
        return false;
      }
      if (doc[i] == '&') {
        const auto semi = doc.find(';', i);
        if (semi == std::string::npos || semi - i > 6) {
          *why = "bare ampersand";
          return false;
        }
      }
      ++i;
      continue;
    }
    const auto close = doc.find('>', i);
    if (close == std::string::npos) {
      *why = "unterminated tag";
      return false;
    }
    std::string tag = doc.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.starts_with("?") || tag.starts_with("!--")) continue;
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) {
        *why = "mismatched </" + tag.substr(1) + ">";
        return false;
      }
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    const std::string name = tag.substr(0, tag.find_first_of(" /\t\n"));
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) {
      *why = "unbalanced quotes in <" + name + ">";
      return false;
    }
    if (stack.empty()) ++roots;
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty() || roots != 1) {
    *why = "unclosed elements or multiple roots";
    return false;
  }
  return true;
}

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(BoxPlot, Examples) {
  const auto a = boxplot_stats(std::vector<double>{1, 2, 3, 4, 5, 6, 7});
  EXPECT_DOUBLE_EQ(a.median, 4.0);
  EXPECT_DOUBLE_EQ(a.q1, 2.5);
  EXPECT_DOUBLE_EQ(a.q3, 5.5);
  EXPECT_TRUE(a.outliers.empty());
  EXPECT_DOUBLE_EQ(a.whisker_low, 1.0);
  EXPECT_DOUBLE_EQ(a.whisker_high, 7.0);

  const auto c = boxplot_stats(std::vector<double>{4, 4, 4});
  EXPECT_DOUBLE_EQ(c.whisker_low, 4.0);
  EXPECT_DOUBLE_EQ(c.q1, 4.0);
  EXPECT_DOUBLE_EQ(c.median, 4.0);
  EXPECT_DOUBLE_EQ(c.q3, 4.0);
  EXPECT_DOUBLE_EQ(c.whisker_high, 4.0);
  EXPECT_TRUE(c.outliers.empty());

  const auto o = boxplot_stats(std::vector<double>{1, 2, 3, 100});
  ASSERT_EQ(o.outliers.size(), 1u);
  EXPECT_DOUBLE_EQ(o.outliers[0], 100.0);
  EXPECT_DOUBLE_EQ(o.q1, 1.75);
  EXPECT_DOUBLE_EQ(o.q3, 27.25);
  // The largest inlier (3) sits below the interpolated q3, so the whisker
  // stops at the box edge.
  EXPECT_DOUBLE_EQ(o.whisker_high, 27.25);
  EXPECT_DOUBLE_EQ(o.whisker_low, 1.0);

  EXPECT_THROW(boxplot_stats(std::vector<double>{}), citestat::Error);
}

TEST(BoxPlot, PartitionsTheData) {
  std::mt19937_64 gen(4);
  std::lognormal_distribution<double> dist(1.0, 1.2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + gen() % 60);
    for (auto& x : v) x = dist(gen);
    const auto b = boxplot_stats(v);
    EXPECT_LE(b.whisker_low, b.q1);
    EXPECT_LE(b.q1, b.median);
    EXPECT_LE(b.median, b.q3);
    EXPECT_LE(b.q3, b.whisker_high);
    const double iqr = b.q3 - b.q1;
    std::size_t inside = 0;
    for (double x : v) {
      if (x >= b.whisker_low && x <= b.whisker_high) ++inside;
    }
    EXPECT_EQ(inside + b.outliers.size(), v.size());
    for (double x : b.outliers) EXPECT_TRUE(x < b.q1 - 1.5 * iqr || x > b.q3 + 1.5 * iqr);
  }
}

TEST(Format, Cells) {
  EXPECT_EQ(citestat::format_mean_sd(13.1, 11.9), "13.1(11.9)");
  EXPECT_EQ(citestat::format_mean_sd(3.0, std::nullopt), "3.0(NA)");
  EXPECT_EQ(citestat::format_median_iqr(9, 5, 17, true), "9(5-17)");
  EXPECT_EQ(citestat::format_median_iqr(9.5, 5.25, 17, true), "9.5(5.2-17)");
  EXPECT_EQ(citestat::format_median_iqr(9, 5, 17, false), "9.0(5.0-17.0)");
  EXPECT_EQ(citestat::format_coefficient_cell(-0.023, 0.007, "***"), "-0.023(0.007)***");
  EXPECT_EQ(citestat::format_coefficient_cell(0.055, 0.166, ""), "0.055(0.166)");
  EXPECT_EQ(citestat::format_fixed(-0.0001, 3), "0.000");
}

TEST(Table1, LayoutAndFooter) {
  const auto records = citestat::build_analysis_records(
      citestat::generate_synthetic_corpus(citestat::reference_generator_spec(60, 2)));
  const auto rows = citestat::table1_rows(records);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0].label, "All");
  EXPECT_EQ(rows[0].h_index.n, records.size());
  const auto table = citestat::render_table1(rows);
  EXPECT_NE(table.markdown.find("| All |"), std::string::npos);
  const auto region = table.markdown.find("North America");
  const auto gender = table.markdown.find("Male");
  const auto cohort = table.markdown.find("2005-");
  EXPECT_LT(region, gender);
  EXPECT_LT(gender, cohort);
  EXPECT_EQ(table.csv.find('\r'), std::string::npos);

  // A single-group sample leaves every other group empty.
  auto only = records;
  for (auto& r : only) r.region = citestat::Region::UK;
  const auto sparse = citestat::render_table1(citestat::table1_rows(only));
  EXPECT_NE(sparse.markdown.find("Empty groups omitted: North America"), std::string::npos);
  EXPECT_EQ(sparse.markdown.find("| North America |"), std::string::npos);
}

TEST(Table2, CellsAndFootnote) {
  const auto records = citestat::build_analysis_records(
      citestat::generate_synthetic_corpus(citestat::reference_generator_spec(200, 5)));
  const auto d1 = citestat::build_design_matrix(records, citestat::ModelSpec::model1());
  const auto d2 = citestat::build_design_matrix(records, citestat::ModelSpec::model2());
  const auto m1 = citestat::summarize_model(citestat::ModelVariant::Model1, citestat::fit_fractional_logit(d1), d1);
  const auto m2 = citestat::summarize_model(citestat::ModelVariant::Model2, citestat::fit_fractional_logit(d2), d2);
  const auto table = citestat::render_table2(&m1, &m2);
  EXPECT_NE(table.markdown.find("\nP<0.01 ***; P<0.05 **; P<0.1 *\n"), std::string::npos);

  const std::string h_cell = citestat::format_coefficient_cell(m1.fit.beta[1], m1.fit.robust_se()[1], m1.wald[1].stars);
  EXPECT_NE(table.markdown.find("| " + h_cell + " |"), std::string::npos) << h_cell;

  // Model 1 leaves the authors-per-cited-paper cells blank.
  const auto line_start = table.markdown.find("Authors per cited paper");
  ASSERT_NE(line_start, std::string::npos);
  const std::string line = table.markdown.substr(line_start, table.markdown.find('\n', line_start) - line_start);
  EXPECT_NE(line.find("|  |  |"), std::string::npos) << line;

  const auto only1 = citestat::render_table2(&m1, nullptr);
  EXPECT_NE(only1.markdown.find(h_cell), std::string::npos);

  auto stalled = m1;
  stalled.fit.converged = false;
  const auto warned = citestat::render_table2(&stalled, &m2);
  EXPECT_NE(warned.markdown.find("did not converge"), std::string::npos);
}

TEST(Figures, FilesSvgAndCaption) {
  const auto records = citestat::build_analysis_records(
      citestat::generate_synthetic_corpus(citestat::reference_generator_spec(150, 9)));
  const auto dir = std::filesystem::temp_directory_path() / "citestat_figures_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto files = citestat::emit_figures(records, dir);
  EXPECT_EQ(files.written.size(), 6u);

  std::vector<double> h, s;
  for (const auto& r : records) {
    h.push_back(r.h_index);
    s.push_back(r.self_prop);
  }
  ASSERT_TRUE(files.scatter_r.has_value());
  EXPECT_NEAR(*files.scatter_r, citestat::pearson_correlation(h, s), 1e-12);

  const auto region_csv = slurp(dir / "fig1_box_by_region.csv");
  const auto region_groups = citestat::group_describe(records, citestat::GroupBy::Region, citestat::StatField::HIndex);
  EXPECT_EQ(std::count(region_csv.begin(), region_csv.end(), '\n'), static_cast<long>(region_groups.size()));
  EXPECT_EQ(region_csv.substr(0, region_csv.find('\n')), "group,n,whisker_low,q1,median,q3,whisker_high,outliers");

  for (const char* name : {"fig1_box_by_region.svg", "fig2_box_by_cohort.svg", "fig3_scatter.svg"}) {
    std::string why;
    EXPECT_TRUE(well_formed_xml(slurp(dir / name), &why)) << name << ": " << why;
  }
  const auto box_svg = slurp(dir / "fig1_box_by_region.svg");
  EXPECT_EQ(count_of(box_svg, "class=\"box\""), region_groups.size() - 1);

  const auto scatter = slurp(dir / "fig3_scatter.svg");
  const auto pos = scatter.find("Pearson r = ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(scatter.substr(pos + 12)), citestat::pearson_correlation(h, s), 1e-12);

  const auto scatter_csv = slurp(dir / "fig3_scatter.csv");
  EXPECT_EQ(scatter_csv.substr(0, scatter_csv.find('\n')), "h,self_prop");
  EXPECT_EQ(std::count(scatter_csv.begin(), scatter_csv.end(), '\n'), static_cast<long>(records.size() + 1));
  std::filesystem::remove_all(dir);
}

TEST(Figures, FiveRegionsFiveRows) {
  std::vector<std::pair<std::string, citestat::BoxStats>> groups;
  for (auto r : citestat::kAllRegions) {
    groups.emplace_back(std::string(citestat::display_label(r)), boxplot_stats(std::vector<double>{1, 2, 3}));
  }
  const auto csv = citestat::box_stats_csv(groups);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  std::string why;
  const auto svg = citestat::boxplot_svg("Title & <test>", "h", groups);
  EXPECT_TRUE(well_formed_xml(svg, &why)) << why;
  EXPECT_EQ(count_of(svg, "class=\"box\""), 5u);
}

TEST(Figures, UnwritableDirectoryIsIo) {
  const auto records = citestat::build_analysis_records(
      citestat::generate_synthetic_corpus(citestat::reference_generator_spec(30, 9)));
  try {
    citestat::emit_figures(records, "/nonexistent/dir/for/figures");
    FAIL();
  } catch (const citestat::Error& e) {
    EXPECT_EQ(e.code(), citestat::ErrorCode::Io);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/for/figures"), std::string::npos);
  }
}
