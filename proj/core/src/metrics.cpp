#include "citestat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "citestat/errors.hpp"
#include "text_util.hpp"

namespace citestat {
namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::InvalidArgument, message); }

// Bucket counts capped at n; h is the largest k with suffix sum >= k.
int h_from_buckets(std::vector<std::size_t>& buckets) {
  const std::size_t n = buckets.size() - 1;
  std::size_t at_least = 0;
  for (std::size_t k = n; k > 0; --k) {
    at_least += buckets[k];
    if (at_least >= k) return static_cast<int>(k);
  }
  return 0;
}

}  // namespace

int h_index(std::span<const std::int64_t> counts) {
  std::vector<std::size_t> buckets(counts.size() + 1, 0);
  for (std::int64_t c : counts) {
    if (c < 0) invalid("citation counts must be non-negative, got " + std::to_string(c));
    ++buckets[std::min(static_cast<std::size_t>(c), counts.size())];
  }
  return h_from_buckets(buckets);
}

int researcher_h_index(std::size_t researcher, const Corpus& corpus) {
  const auto owned = corpus.owned_publications(researcher);
  std::vector<std::size_t> buckets(owned.size() + 1, 0);
  for (PubIndex p : owned) ++buckets[std::min(corpus.incoming(p).size(), owned.size())];
  return h_from_buckets(buckets);
}

int h_index_excluding_self(std::size_t researcher, const Corpus& corpus, const EdgeClassification& edges) {
  const auto owned = corpus.owned_publications(researcher);
  std::vector<std::size_t> buckets(owned.size() + 1, 0);
  for (PubIndex p : owned) {
    std::size_t c = 0;
    for (EdgeIndex e : corpus.incoming(p)) c += edges.is_self(e) ? 0 : 1;
    ++buckets[std::min(c, owned.size())];
  }
  return h_from_buckets(buckets);
}

int h_index_excluding_self(std::string_view researcher_id, const Corpus& corpus) {
  const std::size_t r = corpus.require_researcher(researcher_id);
  std::vector<std::int64_t> counts;
  for (PubIndex p : corpus.owned_publications(r)) {
    std::int64_t c = 0;
    for (EdgeIndex e : corpus.incoming(p)) {
      const auto citing = corpus.author_ids(corpus.citing_of(e));
      const auto cited = corpus.author_ids(p);
      std::vector<AuthorId> common;
      std::set_intersection(citing.begin(), citing.end(), cited.begin(), cited.end(), std::back_inserter(common));
      c += common.empty() ? 1 : 0;
    }
    counts.push_back(c);
  }
  return h_index(counts);
}

std::optional<QuantileMethod> parse_quantile_method(std::string_view name) {
  for (auto m : {QuantileMethod::Linear, QuantileMethod::Lower, QuantileMethod::Higher, QuantileMethod::Nearest,
                 QuantileMethod::Midpoint}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view to_string(QuantileMethod method) {
  switch (method) {
    case QuantileMethod::Linear: return "linear";
    case QuantileMethod::Lower: return "lower";
    case QuantileMethod::Higher: return "higher";
    case QuantileMethod::Nearest: return "nearest";
    case QuantileMethod::Midpoint: return "midpoint";
  }
  return "linear";
}

double quantile_sorted(std::span<const double> sorted, double p, QuantileMethod method) {
  if (sorted.empty()) invalid("quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) invalid("quantile probability outside [0, 1]");
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  switch (method) {
    case QuantileMethod::Linear:
      return frac == 0.0 ? sorted[lo] : sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    case QuantileMethod::Lower:
      return sorted[lo];
    case QuantileMethod::Higher:
      return frac == 0.0 ? sorted[lo] : sorted[hi];
    case QuantileMethod::Nearest:
      if (frac < 0.5) return sorted[lo];
      if (frac > 0.5) return sorted[hi];
      return lo % 2 == 0 ? sorted[lo] : sorted[hi];
    case QuantileMethod::Midpoint:
      return frac == 0.0 ? sorted[lo] : 0.5 * (sorted[lo] + sorted[hi]);
  }
  return sorted[lo];
}

SummaryStats describe(std::span<const double> values, QuantileMethod method) {
  if (values.empty()) invalid("describe() needs at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats s;
  s.n = sorted.size();
  // Summing in sorted order makes the result independent of input order.
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.n);
  // Keep mean inside [min, max] against rounding.
  s.mean = std::clamp(s.mean, sorted.front(), sorted.back());
  if (sorted.front() == sorted.back()) s.mean = sorted.front();
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  s.median = quantile_sorted(sorted, 0.5, method);
  s.q1 = quantile_sorted(sorted, 0.25, method);
  s.q3 = quantile_sorted(sorted, 0.75, method);
  return s;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) invalid("correlation inputs differ in length");
  if (x.size() < 2) invalid("correlation needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) invalid("correlation undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<AnalysisRecord> build_analysis_records(const Corpus& corpus, const EdgeClassification& edges,
                                                   const RecordOptions& options) {
  const RegionMap& regions = options.regions ? *options.regions : RegionMap::builtin();
  const auto researchers = corpus.researchers();
  std::vector<AnalysisRecord> out;
  out.reserve(researchers.size());
  for (std::size_t r = 0; r < researchers.size(); ++r) {
    const auto& prof = researchers[r];
    try {
      AnalysisRecord rec;
      rec.researcher_id = prof.researcher_id;
      rec.tally = citation_tally(r, corpus, edges);
      rec.self_prop = self_citation_proportion(rec.tally).value();
      rec.h_index = researcher_h_index(r, corpus);
      rec.h_index_no_self = h_index_excluding_self(r, corpus, edges);
      rec.region = regions.assign(prof.country);
      rec.gender = prof.gender;
      rec.cohort = assign_cohort(first_publication_year(r, corpus), options.cohort);
      rec.mean_authors = mean_authors_per_cited_paper(r, corpus, options.authors_weighting);
      out.push_back(std::move(rec));
    } catch (const Error& e) {
      const std::string what = e.what();
      if (what.find(prof.researcher_id) != std::string::npos) throw;
      throw Error(e.code(), "researcher '" + prof.researcher_id + "': " + what);
    }
  }
  return out;
}

std::vector<AnalysisRecord> build_analysis_records(const Corpus& corpus, const RecordOptions& options) {
  return build_analysis_records(corpus, EdgeClassification(corpus), options);
}

std::vector<std::string> unmapped_countries(const Corpus& corpus, const RegionMap& regions) {
  std::vector<std::string> out;
  for (const auto& r : corpus.researchers()) {
    if (!regions.contains(r.country)) out.push_back(r.country);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<GroupRow> group_describe(std::span<const AnalysisRecord> records, GroupBy group_by, StatField field,
                                     QuantileMethod method) {
  auto value_of = [field](const AnalysisRecord& r) {
    return field == StatField::HIndex ? static_cast<double>(r.h_index) : r.self_prop;
  };
  std::vector<GroupRow> rows;
  {
    std::vector<double> all;
    all.reserve(records.size());
    for (const auto& r : records) all.push_back(value_of(r));
    rows.push_back({GroupBy::All, "All", describe(all, method)});
  }
  auto add_groups = [&](const auto& groups, auto key_of) {
    for (const auto g : groups) {
      std::vector<double> vals;
      for (const auto& r : records) {
        if (key_of(r) == g) vals.push_back(value_of(r));
      }
      if (!vals.empty()) rows.push_back({group_by, std::string(display_label(g)), describe(vals, method)});
    }
  };
  switch (group_by) {
    case GroupBy::All:
      break;
    case GroupBy::Region:
      add_groups(kAllRegions, [](const AnalysisRecord& r) { return r.region; });
      break;
    case GroupBy::Gender:
      add_groups(kAllGenders, [](const AnalysisRecord& r) { return r.gender; });
      break;
    case GroupBy::Cohort:
      add_groups(kAllCohorts, [](const AnalysisRecord& r) { return r.cohort; });
      break;
  }
  return rows;
}

std::string records_to_csv(std::span<const AnalysisRecord> records) {
  std::string out = "researcher_id,h,h_noself,self_prop,region,gender,cohort,mean_authors\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", detail::csv_field(r.researcher_id), r.h_index,
                       r.h_index_no_self, r.self_prop, to_string(r.region), to_string(r.gender), to_string(r.cohort),
                       r.mean_authors);
  }
  return out;
}

}  // namespace citestat
