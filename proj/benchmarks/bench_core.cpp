#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "citestat/generator.hpp"
#include "citestat/glm.hpp"
#include "citestat/metrics.hpp"
#include "citestat/pipeline.hpp"
#include "citestat/selfcite.hpp"

namespace {

const citestat::Corpus& bench_corpus() {
  static const citestat::Corpus corpus =
      citestat::generate_synthetic_corpus(citestat::reference_generator_spec(545, 11));
  return corpus;
}

}  // namespace

static void BM_HIndex(benchmark::State& state) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<std::int64_t> dist(0, 500);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(state.range(0)));
  for (auto& c : counts) c = dist(gen);
  for (auto _ : state) benchmark::DoNotOptimize(citestat::h_index(counts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HIndex)->Range(16, 1 << 14);

static void BM_ClassifyEdges(benchmark::State& state) {
  const auto& corpus = bench_corpus();
  for (auto _ : state) {
    citestat::EdgeClassification edges(corpus);
    benchmark::DoNotOptimize(edges.self_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.citations().size()));
}
BENCHMARK(BM_ClassifyEdges)->Unit(benchmark::kMillisecond);

static void BM_AnalysisRecords(benchmark::State& state) {
  const auto& corpus = bench_corpus();
  const citestat::EdgeClassification edges(corpus);
  for (auto _ : state) benchmark::DoNotOptimize(citestat::build_analysis_records(corpus, edges));
}
BENCHMARK(BM_AnalysisRecords)->Unit(benchmark::kMillisecond);

static void BM_FitModel1(benchmark::State& state) {
  const auto records = citestat::build_analysis_records(bench_corpus());
  const auto design = citestat::build_design_matrix(records, citestat::ModelSpec::model1());
  for (auto _ : state) benchmark::DoNotOptimize(citestat::fit_fractional_logit(design).beta);
}
BENCHMARK(BM_FitModel1)->Unit(benchmark::kMicrosecond);

static void BM_Generate(benchmark::State& state) {
  const auto spec = citestat::reference_generator_spec(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(citestat::generate_synthetic_corpus(spec).citations().size());
}
BENCHMARK(BM_Generate)->Arg(545)->Unit(benchmark::kMillisecond);

static void BM_Prepare(benchmark::State& state) {
  const citestat::RunConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(citestat::prepare(bench_corpus(), config).records.size());
}
BENCHMARK(BM_Prepare)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
