#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "citestat/corpus.hpp"
#include "citestat/errors.hpp"
#include "citestat/generator.hpp"
#include "citestat/metrics.hpp"
#include "citestat/random.hpp"

using citestat::GeneratorSpec;

TEST(Rng, Deterministic) {
  citestat::Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, Ranges) {
  citestat::Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(rng.below(13), 13u);
    const auto v = rng.between(-3, 4);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 4);
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  const std::array<double, 3> w{0.0, 1.0, 0.0};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(rng.categorical(w), 1u);
}

TEST(Generator, SameSeedSameCorpus) {
  const auto spec = citestat::reference_generator_spec(60, 99);
  const auto a = citestat::generate_synthetic_corpus(spec);
  const auto b = citestat::generate_synthetic_corpus(spec);
  EXPECT_EQ(a, b);
  EXPECT_EQ(citestat::serialize_corpus(a), citestat::serialize_corpus(b));
  auto other = spec;
  other.seed = 100;
  EXPECT_NE(citestat::serialize_corpus(citestat::generate_synthetic_corpus(other)), citestat::serialize_corpus(a));
}

TEST(Generator, ResearcherCount) {
  const auto corpus = citestat::generate_synthetic_corpus(citestat::reference_generator_spec(100, 3));
  EXPECT_EQ(corpus.researchers().size(), 100u);
}

TEST(Generator, GeneratedCorpusSurvivesReparse) {
  const auto corpus = citestat::generate_synthetic_corpus(citestat::reference_generator_spec(40, 5));
  EXPECT_EQ(citestat::parse_corpus(citestat::serialize_corpus(corpus)), corpus);
}

TEST(Generator, LowCitationCountIsExact) {
  auto spec = citestat::reference_generator_spec(120, 8);
  spec.low_citation_count = 31;
  const auto corpus = citestat::generate_synthetic_corpus(spec);
  const auto filtered = citestat::filter_min_citations(corpus, spec.citation_floor);
  EXPECT_EQ(filtered.excluded, 31u);
  EXPECT_EQ(filtered.corpus.researchers().size(), 89u);
}

TEST(Generator, RespectsGroupWeights) {
  auto spec = citestat::reference_generator_spec(50, 1);
  spec.region_weights = {0, 0, 1, 0, 0};
  spec.gender_weights = {0, 1, 0};
  const auto records = citestat::build_analysis_records(citestat::generate_synthetic_corpus(spec));
  for (const auto& r : records) {
    EXPECT_EQ(r.region, citestat::Region::OtherEurope);
    EXPECT_EQ(r.gender, citestat::Gender::Female);
  }
}

TEST(Generator, SpecJsonRoundTrip) {
  auto spec = citestat::reference_generator_spec(682, 2014);
  spec.low_citation_count = 137;
  const auto text = citestat::generator_spec_to_json(spec);
  const auto back = citestat::generator_spec_from_json(text);
  EXPECT_EQ(citestat::generator_spec_to_json(back), text);
  EXPECT_EQ(back.n_researchers, 682u);
  EXPECT_EQ(back.low_citation_count, 137u);
  EXPECT_EQ(back.self_cite_logit_coefficients, spec.self_cite_logit_coefficients);
}

TEST(Generator, InvalidSpecs) {
  auto expect_code = [](const GeneratorSpec& spec, citestat::ErrorCode code) {
    try {
      citestat::validate(spec);
      ADD_FAILURE() << "spec accepted";
    } catch (const citestat::Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  const auto good = citestat::reference_generator_spec(10, 1);
  EXPECT_NO_THROW(citestat::validate(good));

  auto s = good;
  s.region_weights = {0.5, 0.5, 0.5, 0, 0};
  expect_code(s, citestat::ErrorCode::InvalidArgument);
  s = good;
  s.cites_per_pub = {10, 5};
  expect_code(s, citestat::ErrorCode::InvalidArgument);
  s = good;
  s.self_cite_logit_coefficients = {1.0, 2.0};
  expect_code(s, citestat::ErrorCode::InvalidArgument);
  s = good;
  s.pubs_per_researcher = {0, 0};
  expect_code(s, citestat::ErrorCode::Infeasible);
  s = good;
  s.low_citation_count = 11;
  expect_code(s, citestat::ErrorCode::Infeasible);
  s = good;
  s.cites_per_pub = {0, 1};
  s.pubs_per_researcher = {1, 2};
  expect_code(s, citestat::ErrorCode::Infeasible);
  EXPECT_THROW(citestat::generator_spec_from_json("{\"n_researchers\": -1}"), citestat::Error);
}

TEST(Generator, BundledFixtureIsPinned) {
  std::ifstream in(std::string(CITESTAT_TEST_DATA_DIR) + "/fixture_682.spec.json", std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  const auto spec = citestat::generator_spec_from_json(text.str());
  EXPECT_EQ(spec.n_researchers, 682u);
  EXPECT_EQ(spec.low_citation_count, 137u);
  const auto corpus = citestat::generate_synthetic_corpus(spec);
  EXPECT_EQ(citestat::first_publication_year("R042", corpus), 1998);
  EXPECT_EQ(citestat::filter_min_citations(corpus, 20).excluded, 137u);
}
