#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "citestat/corpus.hpp"
#include "citestat/generator.hpp"
#include "citestat/glm.hpp"
#include "citestat/metrics.hpp"
#include "citestat/report.hpp"
#include "citestat/selfcite.hpp"

namespace citestat {

struct RunConfig {
  std::string corpus_path;
  std::size_t min_citations = 20;
  std::optional<std::string> keyword;
  bool fit_model1 = true;
  bool fit_model2 = true;
  std::filesystem::path out_dir = "out";
  QuantileMethod quantile = QuantileMethod::Linear;
  RobustType robust = RobustType::HC1;
  AmeMethod ame = AmeMethod::Derivative;
  GenderPolicy gender_policy = GenderPolicy::DropUnknown;
  CohortBoundary cohort;
  AuthorsWeighting authors_weighting = AuthorsWeighting::PerCitedPaper;
  NameMatching name_matching = NameMatching::FirstInitial;
  std::optional<std::string> region_map_path;
  bool dump_edges = false;
  std::uint64_t seed = 1;
};

/// Filtered corpus plus everything derived from it.
struct PreparedData {
  Corpus corpus;
  EdgeClassification edges;
  std::size_t total_researchers = 0;
  std::size_t excluded_by_keyword = 0;
  std::size_t excluded_by_citations = 0;
  std::vector<AnalysisRecord> records;
  std::vector<std::string> unmapped_countries;
  std::optional<double> r_h_self_prop;  // corr(h, self_prop)
  std::optional<double> r_h_h_noself;   // corr(h, h with self-cites removed)
};

PreparedData prepare(const Corpus& corpus, const RunConfig& config);

/// table1.{md,csv}, records.csv, summary.txt, figures, optionally edges.csv.
std::vector<std::filesystem::path> write_analysis(const PreparedData& data, const RunConfig& config);

struct FitOutputs {
  std::optional<ModelSummary> model1;
  std::optional<ModelSummary> model2;
};

FitOutputs run_models(const PreparedData& data, const RunConfig& config);

/// table2.{md,csv}, fit_model1/2.{json,csv}.
std::vector<std::filesystem::path> write_fits(const FitOutputs& fits, const RunConfig& config);

struct RecoveryRow {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::string term;
  double truth = 0.0;
  double estimate = 0.0;
  double robust_se = 0.0;
  bool covered = false;  // |estimate - truth| <= z_crit * robust_se
};

struct RecoverySummary {
  std::size_t replicates = 0;
  std::vector<std::string> terms;
  std::vector<double> truth;
  std::vector<std::size_t> covered;  // per term
  std::size_t non_converged = 0;
  double mean_self_prop = 0.0;       // averaged over replicates
  std::vector<RecoveryRow> rows;
};

/// Fits Model 1 to corpora generated with seeds base.seed, base.seed + 1, ...
/// and counts how often the Wald interval covers the generating coefficient.
RecoverySummary run_recovery(const GeneratorSpec& base, std::size_t replicates, const RunConfig& config,
                             double z_crit = 3.0);

std::string recovery_csv(const RecoverySummary& summary);

}  // namespace citestat
