#include "citestat/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "citestat/errors.hpp"
#include "citestat/generator.hpp"
#include "citestat/pipeline.hpp"

namespace citestat {
namespace {

enum class ModelChoice { One, Two, Both };

struct Options {
  RunConfig config;
  ModelChoice models = ModelChoice::Both;
  std::optional<std::string> spec_path;
  std::optional<std::size_t> n_researchers;
  std::optional<std::size_t> low_citation_count;
  std::size_t replicates = 0;
  std::optional<std::string> write_corpus;
  bool seed_given = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename E>
void add_choice(CLI::App& cmd, const std::string& name, E& target, const std::map<std::string, E>& choices,
                const std::string& description) {
  std::vector<std::string> names;
  for (const auto& [key, value] : choices) names.push_back(key);
  cmd.add_option_function<std::string>(
         name, [&target, choices](const std::string& v) { target = choices.at(v); }, description)
      ->check(CLI::IsMember(names));
}

void add_corpus_options(CLI::App& cmd, Options& o, bool corpus_required) {
  auto* corpus = cmd.add_option("--corpus", o.config.corpus_path, "Corpus JSON file");
  if (corpus_required) corpus->required();
  add_choice(cmd, "--name-matching", o.config.name_matching,
             {{"initial", NameMatching::FirstInitial}, {"full", NameMatching::FullGivenName}},
             "Author identity rule: initial or full");
}

void add_analysis_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--min-citations", o.config.min_citations, "Inclusion threshold on total citations")
      ->capture_default_str();
  cmd.add_option("--keyword", o.config.keyword, "Keep researchers listing this keyword");
  cmd.add_option("--out", o.config.out_dir, "Output directory")->capture_default_str();
  add_choice(cmd, "--quantile-method", o.config.quantile,
             {{"linear", QuantileMethod::Linear},
              {"lower", QuantileMethod::Lower},
              {"higher", QuantileMethod::Higher},
              {"nearest", QuantileMethod::Nearest},
              {"midpoint", QuantileMethod::Midpoint}},
             "Quantile rule for medians, quartiles and box plots");
  cmd.add_option("--region-map", o.config.region_map_path, "country,region CSV replacing the builtin table");
  cmd.add_flag("--cohort-1980-in-first", o.config.cohort.pre1980_includes_1980,
               "Put first-publication year 1980 in the -1980 cohort");
  add_choice(cmd, "--authors-weighting", o.config.authors_weighting,
             {{"per-paper", AuthorsWeighting::PerCitedPaper}, {"per-citation", AuthorsWeighting::PerCitation}},
             "Mean authors per cited paper: per-paper or per-citation");
  cmd.add_flag("--dump-edges", o.config.dump_edges, "Also write edges.csv");
}

void add_model_options(CLI::App& cmd, Options& o) {
  add_choice(cmd, "--model", o.models,
             {{"1", ModelChoice::One}, {"2", ModelChoice::Two}, {"both", ModelChoice::Both}}, "1, 2 or both");
  add_choice(cmd, "--robust", o.config.robust, {{"hc0", RobustType::HC0}, {"hc1", RobustType::HC1}},
             "hc0 or hc1");
  add_choice(cmd, "--ame", o.config.ame,
             {{"derivative", AmeMethod::Derivative}, {"discrete", AmeMethod::Discrete}},
             "derivative or discrete");
  cmd.add_flag("--strict-gender", "Fail on unknown gender instead of dropping those rows")
      ->each([&o](const std::string&) { o.config.gender_policy = GenderPolicy::Strict; });
}

Corpus load(const Options& o) {
  CorpusOptions copts;
  copts.name_matching = o.config.name_matching;
  return load_corpus_file(o.config.corpus_path, copts);
}

void warn_unmapped(const PreparedData& data, std::ostream& err) {
  for (const auto& country : data.unmapped_countries) {
    err << "W_REGION: country '" << country << "' not in region map, assigned to Other\n";
  }
}

void print_written(const std::vector<std::filesystem::path>& files, std::ostream& out) {
  for (const auto& f : files) out << "wrote " << f.generic_string() << '\n';
}

void apply_model_choice(Options& o) {
  o.config.fit_model1 = o.models != ModelChoice::Two;
  o.config.fit_model2 = o.models != ModelChoice::One;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Corpus corpus = load(o);
  out << fmt::format("ok: {} researchers, {} publications, {} citations\n", corpus.researchers().size(),
                     corpus.publications().size(), corpus.citations().size());
  return 0;
}

int cmd_analyze(const Options& o, bool with_fits, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load(o);
  const PreparedData data = prepare(corpus, o.config);
  warn_unmapped(data, err);
  auto written = write_analysis(data, o.config);
  if (with_fits) {
    auto fits = write_fits(run_models(data, o.config), o.config);
    written.insert(written.end(), fits.begin(), fits.end());
  }
  out << fmt::format("retained {} of {} researchers ({} below {} citations)\n", data.records.size(),
                     data.total_researchers, data.excluded_by_citations, o.config.min_citations);
  print_written(written, out);
  return 0;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load(o);
  const PreparedData data = prepare(corpus, o.config);
  warn_unmapped(data, err);
  const FitOutputs fits = run_models(data, o.config);
  for (const auto* m : {fits.model1 ? &*fits.model1 : nullptr, fits.model2 ? &*fits.model2 : nullptr}) {
    if (m != nullptr && !m->fit.converged) {
      err << "W_CONVERGENCE: " << to_string(m->variant) << " did not converge in " << m->fit.iterations
          << " iterations\n";
    }
  }
  print_written(write_fits(fits, o.config), out);
  return 0;
}

int cmd_simulate(Options& o, std::ostream& out) {
  GeneratorSpec spec = o.spec_path ? generator_spec_from_json(read_file(*o.spec_path))
                                   : reference_generator_spec(545, o.config.seed);
  if (o.n_researchers) spec.n_researchers = *o.n_researchers;
  if (o.low_citation_count) spec.low_citation_count = *o.low_citation_count;
  if (!o.spec_path || o.seed_given) spec.seed = o.config.seed;

  const Corpus corpus = generate_synthetic_corpus(spec);
  std::filesystem::create_directories(o.config.out_dir);
  if (o.write_corpus) write_text_file(*o.write_corpus, serialize_corpus(corpus));
  const PreparedData data = prepare(corpus, o.config);
  auto written = write_analysis(data, o.config);
  auto fit_files = write_fits(run_models(data, o.config), o.config);
  written.insert(written.end(), fit_files.begin(), fit_files.end());
  out << fmt::format("generated {} researchers, {} citations (seed {})\n", corpus.researchers().size(),
                     corpus.citations().size(), spec.seed);
  print_written(written, out);

  if (o.replicates > 0) {
    const RecoverySummary rec = run_recovery(spec, o.replicates, o.config);
    write_text_file(o.config.out_dir / "recovery.csv", recovery_csv(rec));
    out << fmt::format("recovery over {} replicates ({} not converged, mean self_prop {:.4f})\n", rec.replicates,
                       rec.non_converged, rec.mean_self_prop);
    for (std::size_t j = 0; j < rec.terms.size(); ++j) {
      out << fmt::format("  {:<14} truth {:>7.3f}  covered {}/{}\n", rec.terms[j], rec.truth[j], rec.covered[j],
                         rec.replicates);
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-citation and h-index analysis of citation corpora", "citestat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "citestat 0.3.0");

  Options o;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a corpus");
  add_corpus_options(*validate_cmd, o, true);

  auto* analyze_cmd = app.add_subcommand("analyze", "Table 1, records and figures");
  add_corpus_options(*analyze_cmd, o, true);
  add_analysis_options(*analyze_cmd, o);

  auto* fit_cmd = app.add_subcommand("fit", "Fractional-logit models and Table 2");
  add_corpus_options(*fit_cmd, o, true);
  add_analysis_options(*fit_cmd, o);
  add_model_options(*fit_cmd, o);

  auto* report_cmd = app.add_subcommand("report", "analyze and fit in one run");
  add_corpus_options(*report_cmd, o, true);
  add_analysis_options(*report_cmd, o);
  add_model_options(*report_cmd, o);

  auto* simulate_cmd = app.add_subcommand("simulate", "Synthetic corpus, full pipeline, coefficient recovery");
  add_analysis_options(*simulate_cmd, o);
  add_model_options(*simulate_cmd, o);
  simulate_cmd->add_option("--seed", o.config.seed, "Generator seed")->capture_default_str();
  simulate_cmd->add_option("--spec", o.spec_path, "Generator spec JSON");
  simulate_cmd->add_option("--n-researchers", o.n_researchers, "Override researcher count");
  simulate_cmd->add_option("--low-citation-count", o.low_citation_count,
                           "Researchers generated below the citation floor");
  simulate_cmd->add_option("--replicates", o.replicates, "Recovery replicates (seeds seed..seed+k-1)");
  simulate_cmd->add_option("--write-corpus", o.write_corpus, "Also write the generated corpus JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  apply_model_choice(o);
  o.seed_given = simulate_cmd->count("--seed") > 0;

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out);
    if (analyze_cmd->parsed()) return cmd_analyze(o, false, out, err);
    if (fit_cmd->parsed()) return cmd_fit(o, out, err);
    if (report_cmd->parsed()) return cmd_analyze(o, true, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(o, out);
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << to_string(ErrorCode::Io) << ": " << e.what() << '\n';
    return exit_code_for(ErrorCode::Io);
  }
  return 1;
}

}  // namespace citestat
