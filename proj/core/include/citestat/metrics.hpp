#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citestat/corpus.hpp"
#include "citestat/groups.hpp"
#include "citestat/selfcite.hpp"

namespace citestat {

/// Largest h such that at least h entries are >= h; 0 for an empty list.
/// Throws Error(InvalidArgument) on a negative count.
int h_index(std::span<const std::int64_t> citation_counts);

/// h-index over the researcher's owned publications.
int researcher_h_index(std::size_t researcher, const Corpus& corpus);

/// h-index after dropping every incoming self-citation.
int h_index_excluding_self(std::string_view researcher_id, const Corpus& corpus);
int h_index_excluding_self(std::size_t researcher, const Corpus& corpus, const EdgeClassification& edges);

enum class QuantileMethod {
  Linear,    // interpolate at (n-1)p; the default
  Lower,
  Higher,
  Nearest,   // ties to the even order statistic
  Midpoint,
};

std::optional<QuantileMethod> parse_quantile_method(std::string_view name);
std::string_view to_string(QuantileMethod method);

/// Quantile of already-sorted data; p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p, QuantileMethod method = QuantileMethod::Linear);

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sd;  // sample SD (n-1); empty when n == 1
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Throws Error(InvalidArgument) on empty input.
SummaryStats describe(std::span<const double> values, QuantileMethod method = QuantileMethod::Linear);

/// Product-moment correlation. Throws Error(InvalidArgument) on length
/// mismatch, fewer than two points, or a constant argument.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

struct AnalysisRecord {
  std::string researcher_id;
  int h_index = 0;
  int h_index_no_self = 0;
  double self_prop = 0.0;
  Region region = Region::Other;
  Gender gender = Gender::Unknown;
  Cohort cohort = Cohort::Y2005plus;
  double mean_authors = 0.0;
  CitationTally tally;
};

struct RecordOptions {
  const RegionMap* regions = nullptr;  // nullptr: builtin table
  CohortBoundary cohort;
  AuthorsWeighting authors_weighting = AuthorsWeighting::PerCitedPaper;
};

/// One record per researcher, ordered by researcher_id. Errors raised for a
/// researcher are rethrown with its id in the message.
std::vector<AnalysisRecord> build_analysis_records(const Corpus& corpus, const RecordOptions& options = {});
std::vector<AnalysisRecord> build_analysis_records(const Corpus& corpus, const EdgeClassification& edges,
                                                   const RecordOptions& options = {});

/// Countries of the corpus's researchers that fall through to Other.
std::vector<std::string> unmapped_countries(const Corpus& corpus, const RegionMap& regions);

enum class GroupBy { All, Region, Gender, Cohort };
enum class StatField { HIndex, SelfProp };

struct GroupRow {
  GroupBy dimension = GroupBy::All;
  std::string label;
  SummaryStats stats;
};

/// An "All" row, then one row per non-empty group in table order.
std::vector<GroupRow> group_describe(std::span<const AnalysisRecord> records, GroupBy group_by, StatField field,
                                     QuantileMethod method = QuantileMethod::Linear);

/// "researcher_id,h,h_noself,self_prop,region,gender,cohort,mean_authors"
std::string records_to_csv(std::span<const AnalysisRecord> records);

}  // namespace citestat
