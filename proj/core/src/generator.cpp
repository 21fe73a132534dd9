#include "citestat/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "citestat/errors.hpp"
#include "citestat/random.hpp"

namespace citestat {
namespace {

constexpr std::size_t kModel1Terms = 8;

constexpr std::array<std::string_view, 25> kGivenNames{
    "Alice", "Bruno", "Carla", "David", "Elena", "Farid", "Grace", "Hiro",  "Ines",
    "Jonas", "Kofi",  "Lena",  "Marco", "Nadia", "Omar",  "Paula", "Quinn", "Rosa",
    "Samir", "Tara",  "Uma",   "Victor", "Wen",  "Yara",  "Zoe"};

const std::array<std::vector<std::string_view>, 5>& countries_by_region() {
  static const std::array<std::vector<std::string_view>, 5> table{{
      {"United States", "United States", "United States", "Canada"},
      {"United Kingdom"},
      {"Netherlands", "Germany", "Spain", "Sweden", "Switzerland", "France", "Italy", "Norway"},
      {"Australia", "Australia", "New Zealand"},
      {"Japan", "Brazil", "China", "South Africa", "India", "Singapore"},
  }};
  return table;
}

// Unique pronounceable surname for every index: base-70 consonant-vowel
// syllables, at least three of them.
std::string synthetic_surname(std::uint64_t index) {
  static constexpr std::string_view kConsonants = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  std::string digits;
  std::size_t count = 0;
  do {
    const auto s = index % 70;
    digits.insert(0, 1, kVowels[s % 5]);
    digits.insert(0, 1, kConsonants[s / 5]);
    index /= 70;
    ++count;
  } while (index > 0 || count < 3);
  digits[0] = static_cast<char>(digits[0] - 'a' + 'A');
  return digits;
}

std::string padded(std::uint64_t value, std::size_t width) {
  std::string s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::pair<int, int> cohort_years(Cohort c, int reference_year) {
  switch (c) {
    case Cohort::Pre1980: return {1960, 1979};
    case Cohort::Y1980_1989: return {1980, 1989};
    case Cohort::Y1990_1994: return {1990, 1994};
    case Cohort::Y1995_1999: return {1995, 1999};
    case Cohort::Y2000_2004: return {2000, 2004};
    case Cohort::Y2005plus: return {2005, std::max(2005, reference_year - 2)};
  }
  return {2005, reference_year};
}

int h_of(std::vector<int> counts) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  int h = 0;
  while (h < static_cast<int>(counts.size()) && counts[static_cast<std::size_t>(h)] >= h + 1) ++h;
  return h;
}

template <std::size_t N>
void check_weights(const std::array<double, N>& w, const char* name) {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::InvalidArgument, std::string(name) + ": weights must be finite and >= 0");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + ": weights must sum to 1");
  }
}

void check_range(const IntRange& r, const char* name) {
  if (r.lo < 0 || r.hi < r.lo) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + ": range must satisfy 0 <= lo <= hi");
  }
}

struct Person {
  std::string display;
  AuthorKey key;
};

class NamePool {
 public:
  explicit NamePool(Rng& rng) : rng_(rng) {}
  Person next() {
    std::string display(kGivenNames[rng_.below(kGivenNames.size())]);
    display += ' ';
    display += synthetic_surname(counter_++);
    AuthorKey key = normalize_author_name(display);
    return {std::move(display), std::move(key)};
  }

 private:
  Rng& rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace

std::vector<double> model1_reference_coefficients() {
  return {-1.910, -0.023, 0.019, 0.240, 0.420, 0.461, 0.055, 0.031};
}

GeneratorSpec reference_generator_spec(std::size_t n_researchers, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.n_researchers = n_researchers;
  spec.region_weights = {267.0 / 545, 79.0 / 545, 119.0 / 545, 46.0 / 545, 34.0 / 545};
  spec.gender_weights = {391.0 / 545, 154.0 / 545, 0.0};
  spec.cohort_weights = {31.0 / 545, 50.0 / 545, 49.0 / 545, 100.0 / 545, 117.0 / 545, 198.0 / 545};
  spec.self_cite_logit_coefficients = model1_reference_coefficients();
  spec.seed = seed;
  return spec;
}

void validate(const GeneratorSpec& spec) {
  if (spec.n_researchers == 0) throw Error(ErrorCode::InvalidArgument, "n_researchers must be positive");
  check_weights(spec.region_weights, "region_weights");
  check_weights(spec.gender_weights, "gender_weights");
  check_weights(spec.cohort_weights, "cohort_weights");
  check_range(spec.pubs_per_researcher, "pubs_per_researcher");
  check_range(spec.cites_per_pub, "cites_per_pub");
  check_range(spec.coauthors_per_pub, "coauthors_per_pub");
  if (spec.self_cite_logit_coefficients.size() != kModel1Terms) {
    throw Error(ErrorCode::InvalidArgument, "self_cite_logit_coefficients needs 8 Model-1 coefficients");
  }
  for (double b : spec.self_cite_logit_coefficients) {
    if (!std::isfinite(b)) throw Error(ErrorCode::InvalidArgument, "self_cite_logit_coefficients must be finite");
  }
  if (spec.pubs_per_researcher.lo == 0) {
    throw Error(ErrorCode::Infeasible, "pubs_per_researcher.lo must be >= 1: researchers need publications to be cited");
  }
  if (spec.reference_year < 1980) throw Error(ErrorCode::InvalidArgument, "reference_year must be >= 1980");
  if (spec.low_citation_count > spec.n_researchers) {
    throw Error(ErrorCode::Infeasible, "low_citation_count exceeds n_researchers");
  }
  const auto floor = static_cast<long long>(spec.citation_floor);
  if (floor == 0 && spec.low_citation_count > 0) {
    throw Error(ErrorCode::Infeasible, "low_citation_count needs a positive citation_floor");
  }
  if (floor > 0) {
    if (static_cast<long long>(spec.pubs_per_researcher.lo) * spec.cites_per_pub.hi < floor &&
        spec.low_citation_count < spec.n_researchers) {
      throw Error(ErrorCode::Infeasible, "cites_per_pub.hi too small to reach citation_floor");
    }
    if (spec.low_citation_count > 0 &&
        static_cast<long long>(spec.pubs_per_researcher.hi) * spec.cites_per_pub.lo >= floor) {
      throw Error(ErrorCode::Infeasible, "cites_per_pub.lo too large for researchers below citation_floor");
    }
  }
}

Corpus generate_synthetic_corpus(const GeneratorSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  NamePool names(rng);
  const auto& beta = spec.self_cite_logit_coefficients;
  const std::size_t n = spec.n_researchers;
  const std::size_t id_width = std::max<std::size_t>(3, std::to_string(n).size());

  std::vector<bool> is_low(n, false);
  {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < spec.low_citation_count; ++i) {
      const auto j = i + rng.below(n - i);
      std::swap(order[i], order[j]);
      is_low[order[i]] = true;
    }
  }

  const std::size_t pool_size =
      std::max<std::size_t>(4 * static_cast<std::size_t>(spec.cites_per_pub.hi) + 16, 4 * n);
  const std::size_t pool_width = std::to_string(pool_size).size();

  std::vector<ResearcherProfile> researchers;
  std::vector<Publication> pubs;
  std::vector<CitationEdge> edges;
  researchers.reserve(n);

  std::vector<std::string> pool_ids(pool_size);
  for (std::size_t k = 0; k < pool_size; ++k) pool_ids[k] = "X" + padded(k, pool_width);

  for (std::size_t i = 0; i < n; ++i) {
    ResearcherProfile prof;
    prof.researcher_id = "R" + padded(i + 1, id_width);
    const Person self = names.next();
    prof.display_name = self.display;

    const auto region = static_cast<Region>(rng.categorical(spec.region_weights));
    const auto& countries = countries_by_region()[static_cast<std::size_t>(region)];
    prof.country = std::string(countries[rng.below(countries.size())]);
    prof.gender = static_cast<Gender>(rng.categorical(spec.gender_weights));
    const auto cohort = static_cast<Cohort>(rng.categorical(spec.cohort_weights));
    const auto [y0, y1] = cohort_years(cohort, spec.reference_year);
    const int first_year = static_cast<int>(rng.between(y0, y1));
    prof.keywords = {spec.keyword};

    // Career length and a per-researcher impact draw scale both output and
    // citations per paper.
    const double activity = std::clamp((spec.reference_year - first_year) / 35.0, 0.08, 1.0);
    const double u = rng.uniform();
    const double impact = 0.1 + 0.9 * u * u;
    const double scale = std::pow(activity, 0.8) * impact;
    const auto& pr = spec.pubs_per_researcher;
    const auto& cr = spec.cites_per_pub;
    const int n_pubs = pr.lo + static_cast<int>(std::lround(scale * (pr.hi - pr.lo)));
    const int cite_cap = cr.lo + static_cast<int>(std::lround(scale * (cr.hi - cr.lo)));

    std::vector<int> counts(static_cast<std::size_t>(n_pubs));
    for (auto& c : counts) {
      const double v = rng.uniform();
      c = cr.lo + static_cast<int>(std::floor((cite_cap - cr.lo + 1) * v * v));
      c = std::min(c, cr.hi);
    }

    long long total = std::accumulate(counts.begin(), counts.end(), 0LL);
    const auto floor = static_cast<long long>(spec.citation_floor);
    if (floor > 0 && is_low[i] && total >= floor) {
      const long long target = std::max<long long>(static_cast<long long>(n_pubs) * cr.lo,
                                                   rng.between(floor / 2, floor - 1));
      while (total > target) {
        auto& c = counts[rng.below(counts.size())];
        if (c > cr.lo) {
          --c;
          --total;
        }
      }
    } else if (floor > 0 && !is_low[i] && total < floor) {
      while (total < floor) {
        auto& c = counts[rng.below(counts.size())];
        if (c < cr.hi) {
          ++c;
          ++total;
        }
      }
    }

    const int h = h_of(counts);
    const double x[kModel1Terms] = {1.0,
                                    static_cast<double>(h),
                                    h * static_cast<double>(h) / 100.0,
                                    region == Region::UK ? 1.0 : 0.0,
                                    region == Region::OtherEurope ? 1.0 : 0.0,
                                    region == Region::AustraliaNZ ? 1.0 : 0.0,
                                    region == Region::Other ? 1.0 : 0.0,
                                    prof.gender == Gender::Male ? 1.0 : 0.0};
    double eta = 0.0;
    for (std::size_t t = 0; t < kModel1Terms; ++t) eta += x[t] * beta[t];
    const double p_self = 1.0 / (1.0 + std::exp(-eta));

    // Own publications, each with a private set of co-authors.
    const auto& ca = spec.coauthors_per_pub;
    const int team_cap = static_cast<int>(rng.between(ca.lo, ca.hi));
    std::vector<Person> coauthors;
    for (int k = 0; k < std::max(1, 2 * ca.hi); ++k) coauthors.push_back(names.next());

    const std::size_t first_pub = pubs.size();
    for (int j = 0; j < n_pubs; ++j) {
      Publication pub;
      pub.pub_id = prof.researcher_id + "-P" + padded(static_cast<std::uint64_t>(j + 1), 2);
      pub.title = "Working paper " + std::to_string(j + 1) + " by " + self.display;
      pub.year = j == 0 ? first_year : static_cast<int>(rng.between(first_year, spec.reference_year));
      pub.authors.push_back(self.key);
      const int team = static_cast<int>(rng.between(ca.lo, team_cap));
      for (int k = 0; k < team; ++k) pub.authors.push_back(coauthors[rng.below(coauthors.size())].key);
      // Keep the list free of repeats.
      std::vector<AuthorKey> unique;
      for (auto& a : pub.authors) {
        if (std::find(unique.begin(), unique.end(), a) == unique.end()) unique.push_back(a);
      }
      pub.authors = std::move(unique);
      prof.publications.push_back(pub.pub_id);
      pubs.push_back(std::move(pub));
    }

    std::vector<std::string> extra_ids;
    for (int j = 0; j < n_pubs; ++j) {
      const auto& cited_id = pubs[first_pub + static_cast<std::size_t>(j)].pub_id;
      int self_count = 0;
      for (int c = 0; c < counts[static_cast<std::size_t>(j)]; ++c) self_count += rng.bernoulli(p_self) ? 1 : 0;
      const int external = counts[static_cast<std::size_t>(j)] - self_count;

      // Self-citations come from distinct sibling papers first.
      std::vector<std::size_t> siblings;
      for (int s = 0; s < n_pubs; ++s) {
        if (s != j) siblings.push_back(first_pub + static_cast<std::size_t>(s));
      }
      const int from_siblings = std::min<int>(self_count, static_cast<int>(siblings.size()));
      for (int s = 0; s < from_siblings; ++s) {
        const auto pick = static_cast<std::size_t>(s) + rng.below(siblings.size() - static_cast<std::size_t>(s));
        std::swap(siblings[static_cast<std::size_t>(s)], siblings[pick]);
        edges.push_back({pubs[siblings[static_cast<std::size_t>(s)]].pub_id, cited_id});
      }
      for (int s = from_siblings; s < self_count; ++s) {
        const auto k = static_cast<std::size_t>(s - from_siblings);
        if (k >= extra_ids.size()) {
          Publication pub;
          pub.pub_id = prof.researcher_id + "-S" + padded(k + 1, 2);
          pub.title = "Companion note " + std::to_string(k + 1) + " by " + self.display;
          pub.year = static_cast<int>(rng.between(first_year, spec.reference_year));
          pub.authors = {self.key, coauthors[rng.below(coauthors.size())].key};
          extra_ids.push_back(pub.pub_id);
          pubs.push_back(std::move(pub));
        }
        edges.push_back({extra_ids[k], cited_id});
      }

      std::unordered_set<std::size_t> chosen;
      while (static_cast<int>(chosen.size()) < external) {
        const auto k = static_cast<std::size_t>(rng.below(pool_size));
        if (chosen.insert(k).second) edges.push_back({pool_ids[k], cited_id});
      }
    }
    researchers.push_back(std::move(prof));
  }

  // External citing works, authored by people outside every researcher's
  // circle.
  for (std::size_t k = 0; k < pool_size; ++k) {
    Publication pub;
    pub.pub_id = pool_ids[k];
    pub.title = "External study " + std::to_string(k + 1);
    pub.year = static_cast<int>(rng.between(1990, spec.reference_year));
    const int n_auth = static_cast<int>(rng.between(1, 3));
    for (int a = 0; a < n_auth; ++a) pub.authors.push_back(names.next().key);
    pubs.push_back(std::move(pub));
  }

  CorpusOptions options;
  options.max_year = std::max(spec.reference_year, 2014);
  return Corpus::build(std::move(researchers), std::move(pubs), std::move(edges), options);
}

namespace {

template <typename Enum, std::size_t N>
nlohmann::json weights_to_json(const std::array<double, N>& w, const std::array<Enum, N>& labels) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < N; ++i) j[std::string(to_string(labels[i]))] = w[i];
  return j;
}

template <typename Enum, std::size_t N>
std::array<double, N> weights_from_json(const nlohmann::json& j, const std::array<Enum, N>& labels,
                                        const char* name) {
  std::array<double, N> w{};
  if (!j.is_object()) throw Error(ErrorCode::Schema, std::string(name) + ": expected object");
  for (std::size_t i = 0; i < N; ++i) {
    const auto it = j.find(std::string(to_string(labels[i])));
    w[i] = it == j.end() ? 0.0 : it->template get<double>();
  }
  return w;
}

}  // namespace

std::string generator_spec_to_json(const GeneratorSpec& spec) {
  nlohmann::ordered_json j;
  j["n_researchers"] = spec.n_researchers;
  j["region_weights"] = weights_to_json(spec.region_weights, kAllRegions);
  j["gender_weights"] = weights_to_json(spec.gender_weights, kAllGenders);
  j["cohort_weights"] = weights_to_json(spec.cohort_weights, kAllCohorts);
  j["pubs_per_researcher"] = {spec.pubs_per_researcher.lo, spec.pubs_per_researcher.hi};
  j["cites_per_pub"] = {spec.cites_per_pub.lo, spec.cites_per_pub.hi};
  j["coauthors_per_pub"] = {spec.coauthors_per_pub.lo, spec.coauthors_per_pub.hi};
  j["self_cite_logit_coefficients"] = spec.self_cite_logit_coefficients;
  j["seed"] = spec.seed;
  j["low_citation_count"] = spec.low_citation_count;
  j["citation_floor"] = spec.citation_floor;
  j["reference_year"] = spec.reference_year;
  j["keyword"] = spec.keyword;
  return j.dump(2) + "\n";
}

GeneratorSpec generator_spec_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Syntax, std::string("generator spec is not valid JSON: ") + e.what(),
                e.byte > 0 ? e.byte - 1 : 0);
  }
  GeneratorSpec spec;
  try {
    auto range = [&](const char* key, IntRange fallback) {
      if (!j.contains(key)) return fallback;
      const auto& a = j.at(key);
      if (!a.is_array() || a.size() != 2) throw Error(ErrorCode::Schema, std::string(key) + ": expected [lo, hi]");
      return IntRange{a[0].get<int>(), a[1].get<int>()};
    };
    spec.n_researchers = j.at("n_researchers").get<std::size_t>();
    spec.region_weights = weights_from_json(j.at("region_weights"), kAllRegions, "region_weights");
    spec.gender_weights = weights_from_json(j.at("gender_weights"), kAllGenders, "gender_weights");
    spec.cohort_weights = weights_from_json(j.at("cohort_weights"), kAllCohorts, "cohort_weights");
    spec.pubs_per_researcher = range("pubs_per_researcher", spec.pubs_per_researcher);
    spec.cites_per_pub = range("cites_per_pub", spec.cites_per_pub);
    spec.coauthors_per_pub = range("coauthors_per_pub", spec.coauthors_per_pub);
    spec.self_cite_logit_coefficients = j.at("self_cite_logit_coefficients").get<std::vector<double>>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.low_citation_count = j.value("low_citation_count", spec.low_citation_count);
    spec.citation_floor = j.value("citation_floor", spec.citation_floor);
    spec.reference_year = j.value("reference_year", spec.reference_year);
    spec.keyword = j.value("keyword", spec.keyword);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("generator spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

}  // namespace citestat
