#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "citestat/corpus.hpp"

namespace citestat {

struct IntRange {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// Parameters of a synthetic corpus. Weight arrays follow the enum order of
/// Region, Gender and Cohort. Each citation a researcher receives is a
/// self-citation with probability inv_logit(x . beta), x being the
/// researcher's Model-1 regressor row [1, h, h^2/100, UK, OtherEurope,
/// AustraliaNZ, Other, Male].
struct GeneratorSpec {
  std::size_t n_researchers = 545;
  std::array<double, 5> region_weights{};
  std::array<double, 3> gender_weights{};
  std::array<double, 6> cohort_weights{};
  IntRange pubs_per_researcher{8, 120};
  IntRange cites_per_pub{0, 240};
  IntRange coauthors_per_pub{0, 4};
  std::vector<double> self_cite_logit_coefficients;
  std::uint64_t seed = 1;

  // Exactly this many researchers end with fewer than `citation_floor`
  // citations; everyone else ends with at least that many. A floor of 0
  // disables both adjustments.
  std::size_t low_citation_count = 0;
  std::size_t citation_floor = 20;

  int reference_year = 2014;
  std::string keyword = "Health Economics";

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// Reference Model-1 coefficients in regressor order (intercept first).
std::vector<double> model1_reference_coefficients();

/// Group shares of the 545-researcher sample with Model-1 self-citation
/// coefficients; ranges tuned so the h-index spread resembles that sample.
GeneratorSpec reference_generator_spec(std::size_t n_researchers, std::uint64_t seed);

/// Throws Error(InvalidArgument) or Error(Infeasible).
void validate(const GeneratorSpec& spec);

/// Deterministic in the spec (seed included).
Corpus generate_synthetic_corpus(const GeneratorSpec& spec);

std::string generator_spec_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(std::string_view text);

}  // namespace citestat
