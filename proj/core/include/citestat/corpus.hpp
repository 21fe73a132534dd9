#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citestat/author_name.hpp"
#include "citestat/groups.hpp"

namespace citestat {

struct Publication {
  std::string pub_id;
  std::string title;
  int year = 0;
  std::vector<AuthorKey> authors;  // ordered as published, never empty

  friend bool operator==(const Publication&, const Publication&) = default;
};

struct CitationEdge {
  std::string citing;
  std::string cited;

  friend bool operator==(const CitationEdge&, const CitationEdge&) = default;
  friend auto operator<=>(const CitationEdge&, const CitationEdge&) = default;
};

struct ResearcherProfile {
  std::string researcher_id;
  std::string display_name;
  std::string country;
  Gender gender = Gender::Unknown;
  std::vector<std::string> publications;  // owned pub_ids, kept sorted
  std::vector<std::string> keywords;

  friend bool operator==(const ResearcherProfile&, const ResearcherProfile&) = default;
};

struct CorpusOptions {
  NameMatching name_matching = NameMatching::FirstInitial;
  int min_year = 1900;
  std::optional<int> max_year;  // unset: the current calendar year
};

using PubIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;
using AuthorId = std::uint32_t;

/// Validated, immutable citation graph plus the researcher profiles that own
/// parts of it. Researchers, publications and edges are stored sorted by id,
/// so two corpora built from the same records in any order compare equal.
///
/// Copies are cheap: the publication/edge graph is shared between a corpus
/// and every researcher subset derived from it.
class Corpus {
 public:
  Corpus();

  /// Validates every invariant and throws Error(Integrity | InvalidName)
  /// naming the first offending id.
  static Corpus build(std::vector<ResearcherProfile> researchers,
                      std::vector<Publication> publications,
                      std::vector<CitationEdge> citations,
                      const CorpusOptions& options = {});

  std::span<const ResearcherProfile> researchers() const noexcept { return researchers_; }
  std::span<const Publication> publications() const noexcept;
  std::span<const CitationEdge> citations() const noexcept;

  std::optional<std::size_t> researcher_index(std::string_view researcher_id) const;
  /// Throws Error(UnknownResearcher).
  std::size_t require_researcher(std::string_view researcher_id) const;
  const AuthorKey& researcher_key(std::size_t researcher) const { return researcher_keys_[researcher]; }
  std::span<const PubIndex> owned_publications(std::size_t researcher) const { return owned_[researcher]; }

  std::optional<PubIndex> publication_index(std::string_view pub_id) const;
  const Publication& publication(PubIndex pub) const;

  /// Edges whose cited endpoint is `pub`, in edge order.
  std::span<const EdgeIndex> incoming(PubIndex pub) const;
  PubIndex citing_of(EdgeIndex edge) const;
  PubIndex cited_of(EdgeIndex edge) const;

  /// Interned author ids of a publication, sorted and deduplicated.
  std::span<const AuthorId> author_ids(PubIndex pub) const;

  NameMatching name_matching() const noexcept;

  /// Same graph, researcher list restricted to the given indices.
  Corpus select_researchers(std::span<const std::size_t> indices) const;

  friend bool operator==(const Corpus& a, const Corpus& b);

 private:
  struct Graph;

  std::shared_ptr<const Graph> graph_;
  std::vector<ResearcherProfile> researchers_;
  std::vector<AuthorKey> researcher_keys_;
  std::vector<std::vector<PubIndex>> owned_;
};

/// Incoming edges over all publications the researcher owns, self-citations
/// included.
std::size_t citation_total(std::size_t researcher, const Corpus& corpus);

struct FilterResult {
  Corpus corpus;
  std::size_t excluded = 0;
};

/// Keeps researchers with at least `threshold` citations (inclusive). The
/// publication and edge sets are untouched.
FilterResult filter_min_citations(const Corpus& corpus, std::size_t threshold);

/// Keeps researchers listing `keyword` (case-insensitive, trimmed).
FilterResult filter_by_keyword(const Corpus& corpus, std::string_view keyword);

/// Earliest year among owned publications; throws Error(UndefinedCohort) when
/// the researcher owns none.
int first_publication_year(std::string_view researcher_id, const Corpus& corpus);
int first_publication_year(std::size_t researcher, const Corpus& corpus);

// Interchange format: one JSON document with "researchers", "publications"
// and "citations" arrays. See docs/corpus-format.md.
Corpus parse_corpus(std::string_view bytes, const CorpusOptions& options = {});
std::string serialize_corpus(const Corpus& corpus);

/// Reads and parses a corpus file; unreadable paths raise Error(Io).
Corpus load_corpus_file(const std::string& path, const CorpusOptions& options = {});

}  // namespace citestat
