#include "citestat/selfcite.hpp"

#include <algorithm>

#include "citestat/errors.hpp"
#include "text_util.hpp"

namespace citestat {
namespace {

// Both spans sorted ascending.
bool intersects(std::span<const AuthorId> a, std::span<const AuthorId> b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

}  // namespace

bool is_self_citation(std::span<const AuthorKey> citing_authors, std::span<const AuthorKey> cited_authors) {
  if (citing_authors.empty() || cited_authors.empty()) {
    throw Error(ErrorCode::InvalidArgument, "self-citation check needs non-empty author sets");
  }
  for (const auto& a : citing_authors) {
    if (std::find(cited_authors.begin(), cited_authors.end(), a) != cited_authors.end()) return true;
  }
  return false;
}

SelfCiteProportion::SelfCiteProportion(const CitationTally& tally) {
  if (tally.total == 0) {
    throw Error(ErrorCode::UndefinedProportion, "self-citation proportion undefined with zero citations");
  }
  value_ = static_cast<double>(tally.self) / static_cast<double>(tally.total);
}

SelfCiteProportion self_citation_proportion(const CitationTally& tally) { return SelfCiteProportion(tally); }

EdgeClassification::EdgeClassification(const Corpus& corpus) : flags_(corpus.citations().size(), 0) {
  for (EdgeIndex e = 0; e < flags_.size(); ++e) {
    const bool self = intersects(corpus.author_ids(corpus.citing_of(e)), corpus.author_ids(corpus.cited_of(e)));
    flags_[e] = self ? 1 : 0;
    self_count_ += self ? 1 : 0;
  }
}

CitationTally citation_tally(std::size_t researcher, const Corpus& corpus, const EdgeClassification& edges) {
  CitationTally t;
  for (PubIndex p : corpus.owned_publications(researcher)) {
    for (EdgeIndex e : corpus.incoming(p)) {
      ++t.total;
      if (edges.is_self(e)) ++t.self;
    }
  }
  return t;
}

CitationTally citation_tally(std::string_view researcher_id, const Corpus& corpus) {
  const std::size_t r = corpus.require_researcher(researcher_id);
  CitationTally t;
  for (PubIndex p : corpus.owned_publications(r)) {
    const auto cited_authors = corpus.author_ids(p);
    for (EdgeIndex e : corpus.incoming(p)) {
      ++t.total;
      if (intersects(corpus.author_ids(corpus.citing_of(e)), cited_authors)) ++t.self;
    }
  }
  return t;
}

double mean_authors_per_cited_paper(std::size_t researcher, const Corpus& corpus, AuthorsWeighting weighting) {
  double weighted_sum = 0.0;
  double weight_total = 0.0;
  for (PubIndex p : corpus.owned_publications(researcher)) {
    const auto cites = corpus.incoming(p).size();
    if (cites == 0) continue;
    const double w = weighting == AuthorsWeighting::PerCitedPaper ? 1.0 : static_cast<double>(cites);
    weighted_sum += w * static_cast<double>(corpus.publication(p).authors.size());
    weight_total += w;
  }
  if (weight_total == 0.0) {
    throw Error(ErrorCode::UndefinedCovariate, "researcher '" + corpus.researchers()[researcher].researcher_id +
                                                   "' has no cited publications");
  }
  return weighted_sum / weight_total;
}

double mean_authors_per_cited_paper(std::string_view researcher_id, const Corpus& corpus,
                                    AuthorsWeighting weighting) {
  return mean_authors_per_cited_paper(corpus.require_researcher(researcher_id), corpus, weighting);
}

std::string edge_classification_csv(const Corpus& corpus, const EdgeClassification& edges) {
  std::string out = "citing_id,cited_id,is_self\n";
  const auto list = corpus.citations();
  for (EdgeIndex e = 0; e < list.size(); ++e) {
    out += detail::csv_field(list[e].citing);
    out += ',';
    out += detail::csv_field(list[e].cited);
    out += edges.is_self(e) ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace citestat
