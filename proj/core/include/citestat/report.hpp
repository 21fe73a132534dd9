#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citestat/glm.hpp"
#include "citestat/metrics.hpp"

namespace citestat {

/// Tukey box: whiskers reach the most extreme data inside
/// [q1 - 1.5 IQR, q3 + 1.5 IQR]; everything beyond is an outlier.
struct BoxStats {
  std::size_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;  // ascending
};

BoxStats boxplot_stats(std::span<const double> values, QuantileMethod method = QuantileMethod::Linear);

struct Table1Row {
  GroupBy dimension = GroupBy::All;
  std::string label;
  SummaryStats h_index;
  SummaryStats self_prop;
};

/// All, then region, gender and cohort blocks; empty groups are skipped.
std::vector<Table1Row> table1_rows(std::span<const AnalysisRecord> records,
                                   QuantileMethod method = QuantileMethod::Linear);

struct RenderedTable {
  std::string markdown;
  std::string csv;
};

// Cell formats shared by both tables.
std::string format_mean_sd(double mean, const std::optional<double>& sd);
std::string format_median_iqr(double median, double q1, double q3, bool trim_integral);
std::string format_fixed(double value, int decimals);
std::string format_coefficient_cell(double coefficient, double standard_error, const std::string& stars);

/// Self-citation cells are printed as percentages.
RenderedTable render_table1(std::span<const Table1Row> rows);

inline constexpr std::string_view kSignificanceFootnote = "P<0.01 ***; P<0.05 **; P<0.1 *";

/// Either model may be absent; its columns are then left empty.
RenderedTable render_table2(const ModelSummary* model1, const ModelSummary* model2);

struct FigureFiles {
  std::vector<std::filesystem::path> written;
  std::optional<double> scatter_r;  // Pearson r of (h, self_prop)
};

std::string box_stats_csv(std::span<const std::pair<std::string, BoxStats>> groups);
std::string boxplot_svg(const std::string& title, const std::string& axis_label,
                        std::span<const std::pair<std::string, BoxStats>> groups);
std::string scatter_svg(const std::string& title, std::span<const double> x, std::span<const double> y,
                        const std::optional<double>& r);

/// Writes fig1_box_by_region, fig2_box_by_cohort and fig3_scatter as .csv
/// and .svg into `out_dir`.
FigureFiles emit_figures(std::span<const AnalysisRecord> records, const std::filesystem::path& out_dir,
                         QuantileMethod method = QuantileMethod::Linear);

/// Writes bytes verbatim (LF endings preserved); Error(Io) names the path.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace citestat
