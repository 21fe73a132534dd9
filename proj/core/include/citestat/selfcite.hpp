#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "citestat/author_name.hpp"
#include "citestat/corpus.hpp"

namespace citestat {

/// True iff the two author sets share at least one key. Symmetric. Throws
/// Error(InvalidArgument) if either side is empty.
bool is_self_citation(std::span<const AuthorKey> citing_authors, std::span<const AuthorKey> cited_authors);

struct CitationTally {
  std::size_t total = 0;
  std::size_t self = 0;
  friend bool operator==(const CitationTally&, const CitationTally&) = default;
};

/// Fraction of citations that are self-citations, always within [0, 1].
class SelfCiteProportion {
 public:
  /// Throws Error(UndefinedProportion) when tally.total == 0.
  explicit SelfCiteProportion(const CitationTally& tally);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

SelfCiteProportion self_citation_proportion(const CitationTally& tally);

/// Per-edge flags, indexed like Corpus::citations().
class EdgeClassification {
 public:
  EdgeClassification() = default;
  explicit EdgeClassification(const Corpus& corpus);
  bool is_self(EdgeIndex edge) const { return flags_[edge] != 0; }
  std::size_t size() const noexcept { return flags_.size(); }
  std::size_t self_count() const noexcept { return self_count_; }

 private:
  std::vector<unsigned char> flags_;
  std::size_t self_count_ = 0;
};

CitationTally citation_tally(std::string_view researcher_id, const Corpus& corpus);
CitationTally citation_tally(std::size_t researcher, const Corpus& corpus, const EdgeClassification& edges);

enum class AuthorsWeighting {
  PerCitedPaper,  // each distinct cited paper counts once
  PerCitation,    // weighted by citations received (sensitivity variant)
};

/// Mean author-list length over the researcher's owned papers that receive
/// at least one citation. Throws Error(UndefinedCovariate) when none do.
double mean_authors_per_cited_paper(std::string_view researcher_id, const Corpus& corpus,
                                    AuthorsWeighting weighting = AuthorsWeighting::PerCitedPaper);
double mean_authors_per_cited_paper(std::size_t researcher, const Corpus& corpus,
                                    AuthorsWeighting weighting = AuthorsWeighting::PerCitedPaper);

/// "citing_id,cited_id,is_self" with one line per edge.
std::string edge_classification_csv(const Corpus& corpus, const EdgeClassification& edges);

}  // namespace citestat
