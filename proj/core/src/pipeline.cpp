#include "citestat/pipeline.hpp"

#include <fmt/format.h>

#include "citestat/errors.hpp"

namespace citestat {
namespace {

std::optional<double> try_correlation(std::span<const double> x, std::span<const double> y) {
  try {
    return pearson_correlation(x, y);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string optional_text(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string("undefined");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");
  }
}

}  // namespace

PreparedData prepare(const Corpus& corpus, const RunConfig& config) {
  PreparedData data;
  data.total_researchers = corpus.researchers().size();
  Corpus working = corpus;
  if (config.keyword) {
    auto kw = filter_by_keyword(working, *config.keyword);
    data.excluded_by_keyword = kw.excluded;
    working = std::move(kw.corpus);
  }
  auto filtered = filter_min_citations(working, config.min_citations);
  data.excluded_by_citations = filtered.excluded;
  data.corpus = std::move(filtered.corpus);
  if (data.corpus.researchers().empty()) {
    throw Error(ErrorCode::InsufficientData, "no researchers left after filtering");
  }

  std::optional<RegionMap> custom;
  if (config.region_map_path) custom = RegionMap::from_file(*config.region_map_path);
  const RegionMap& regions = custom ? *custom : RegionMap::builtin();

  data.edges = EdgeClassification(data.corpus);
  RecordOptions opts;
  opts.regions = &regions;
  opts.cohort = config.cohort;
  opts.authors_weighting = config.authors_weighting;
  data.records = build_analysis_records(data.corpus, data.edges, opts);
  data.unmapped_countries = unmapped_countries(data.corpus, regions);

  std::vector<double> h, s, h0;
  for (const auto& r : data.records) {
    h.push_back(r.h_index);
    s.push_back(r.self_prop);
    h0.push_back(r.h_index_no_self);
  }
  data.r_h_self_prop = try_correlation(h, s);
  data.r_h_h_noself = try_correlation(h, h0);
  return data;
}

std::vector<std::filesystem::path> write_analysis(const PreparedData& data, const RunConfig& config) {
  ensure_dir(config.out_dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& name, const std::string& content) {
    write_text_file(config.out_dir / name, content);
    written.push_back(config.out_dir / name);
  };
  const auto table = render_table1(table1_rows(data.records, config.quantile));
  write("table1.md", table.markdown);
  write("table1.csv", table.csv);
  write("records.csv", records_to_csv(data.records));
  const auto figures = emit_figures(data.records, config.out_dir, config.quantile);
  written.insert(written.end(), figures.written.begin(), figures.written.end());
  if (config.dump_edges) write("edges.csv", edge_classification_csv(data.corpus, data.edges));

  std::string summary;
  summary += fmt::format("researchers_total={}\n", data.total_researchers);
  summary += fmt::format("excluded_by_keyword={}\n", data.excluded_by_keyword);
  summary += fmt::format("excluded_min_citations={}\n", data.excluded_by_citations);
  summary += fmt::format("retained={}\n", data.records.size());
  summary += fmt::format("min_citations={}\n", config.min_citations);
  summary += fmt::format("self_citations={}\n", data.edges.self_count());
  summary += fmt::format("corr_h_self_prop={}\n", optional_text(data.r_h_self_prop));
  summary += fmt::format("corr_h_h_noself={}\n", optional_text(data.r_h_h_noself));
  write("summary.txt", summary);
  return written;
}

FitOutputs run_models(const PreparedData& data, const RunConfig& config) {
  FitOutputs out;
  FitOptions options;
  options.robust = config.robust;
  for (const auto variant : {ModelVariant::Model1, ModelVariant::Model2}) {
    const bool wanted = variant == ModelVariant::Model1 ? config.fit_model1 : config.fit_model2;
    if (!wanted) continue;
    const DesignData design = build_design_matrix(data.records, ModelSpec{variant}, config.gender_policy);
    auto summary = summarize_model(variant, fit_fractional_logit(design, options), design, config.ame);
    (variant == ModelVariant::Model1 ? out.model1 : out.model2) = std::move(summary);
  }
  return out;
}

std::vector<std::filesystem::path> write_fits(const FitOutputs& fits, const RunConfig& config) {
  ensure_dir(config.out_dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& name, const std::string& content) {
    write_text_file(config.out_dir / name, content);
    written.push_back(config.out_dir / name);
  };
  const auto table = render_table2(fits.model1 ? &*fits.model1 : nullptr, fits.model2 ? &*fits.model2 : nullptr);
  write("table2.md", table.markdown);
  write("table2.csv", table.csv);
  if (fits.model1) {
    write("fit_model1.json", fit_to_json(*fits.model1));
    write("fit_model1.csv", fit_to_csv(*fits.model1));
  }
  if (fits.model2) {
    write("fit_model2.json", fit_to_json(*fits.model2));
    write("fit_model2.csv", fit_to_csv(*fits.model2));
  }
  return written;
}

RecoverySummary run_recovery(const GeneratorSpec& base, std::size_t replicates, const RunConfig& config,
                             double z_crit) {
  RecoverySummary summary;
  summary.replicates = replicates;
  summary.terms = ModelSpec::model1().regressors();
  summary.truth = base.self_cite_logit_coefficients;
  summary.covered.assign(summary.terms.size(), 0);
  FitOptions options;
  options.robust = config.robust;
  double prop_sum = 0.0;
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    GeneratorSpec spec = base;
    spec.seed = base.seed + rep;
    const Corpus corpus = generate_synthetic_corpus(spec);
    const PreparedData data = prepare(corpus, config);
    const DesignData design = build_design_matrix(data.records, ModelSpec::model1(), config.gender_policy);
    const FitResult fit = fit_fractional_logit(design, options);
    if (!fit.converged) ++summary.non_converged;
    prop_sum += design.y.mean();
    const Eigen::VectorXd se = fit.robust_se();
    for (std::size_t j = 0; j < summary.terms.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      RecoveryRow row{rep, spec.seed, summary.terms[j], summary.truth[j], fit.beta[jj], se[jj], false};
      row.covered = std::abs(row.estimate - row.truth) <= z_crit * row.robust_se;
      if (row.covered) ++summary.covered[j];
      summary.rows.push_back(std::move(row));
    }
  }
  summary.mean_self_prop = replicates > 0 ? prop_sum / static_cast<double>(replicates) : 0.0;
  return summary;
}

std::string recovery_csv(const RecoverySummary& summary) {
  std::string out = "replicate,seed,term,truth,estimate,robust_se,covered\n";
  for (const auto& r : summary.rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.replicate, r.seed, r.term, r.truth, r.estimate, r.robust_se,
                       r.covered ? 1 : 0);
  }
  return out;
}

}  // namespace citestat
