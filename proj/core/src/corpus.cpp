#include "citestat/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <limits>
#include <numeric>

#include "citestat/errors.hpp"

namespace citestat {

struct Corpus::Graph {
  NameMatching name_matching = NameMatching::FirstInitial;
  std::vector<Publication> publications;
  std::vector<CitationEdge> edges;
  std::vector<PubIndex> edge_citing;
  std::vector<PubIndex> edge_cited;
  // CSR: incoming edges per cited publication.
  std::vector<std::size_t> incoming_offsets;
  std::vector<EdgeIndex> incoming_edges;
  // CSR: interned author ids per publication.
  std::vector<std::size_t> author_offsets;
  std::vector<AuthorId> author_ids;
};

namespace {

int current_year() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
#if defined(_WIN32)
  gmtime_s(&utc, &now);
#else
  gmtime_r(&now, &utc);
#endif
  return utc.tm_year + 1900;
}

[[noreturn]] void integrity(const std::string& message) { throw Error(ErrorCode::Integrity, message); }

std::optional<PubIndex> find_pub(const std::vector<Publication>& pubs, std::string_view id) {
  const auto it = std::lower_bound(pubs.begin(), pubs.end(), id,
                                   [](const Publication& p, std::string_view v) { return p.pub_id < v; });
  if (it == pubs.end() || it->pub_id != id) return std::nullopt;
  return static_cast<PubIndex>(it - pubs.begin());
}

std::string trimmed_lower(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Corpus::Corpus() : graph_(std::make_shared<Graph>()) {}

Corpus Corpus::build(std::vector<ResearcherProfile> researchers, std::vector<Publication> publications,
                     std::vector<CitationEdge> citations, const CorpusOptions& options) {
  const int max_year = options.max_year.value_or(current_year());
  auto graph = std::make_shared<Graph>();
  graph->name_matching = options.name_matching;

  for (const auto& p : publications) {
    if (p.pub_id.empty()) integrity("publication with empty pub_id");
    if (p.authors.empty()) integrity("publication '" + p.pub_id + "' has no authors");
    if (p.year < options.min_year || p.year > max_year) {
      integrity("publication '" + p.pub_id + "' has year " + std::to_string(p.year) + " outside [" +
                std::to_string(options.min_year) + ", " + std::to_string(max_year) + "]");
    }
  }
  std::sort(publications.begin(), publications.end(),
            [](const Publication& a, const Publication& b) { return a.pub_id < b.pub_id; });
  for (std::size_t i = 1; i < publications.size(); ++i) {
    if (publications[i].pub_id == publications[i - 1].pub_id) {
      integrity("duplicate publication id '" + publications[i].pub_id + "'");
    }
  }
  if (publications.size() > std::numeric_limits<PubIndex>::max()) integrity("too many publications");

  // Resolve edges to index pairs; index order equals id order.
  std::vector<std::pair<PubIndex, PubIndex>> resolved;
  resolved.reserve(citations.size());
  for (const auto& e : citations) {
    const auto citing = find_pub(publications, e.citing);
    if (!citing) integrity("citation references unknown publication '" + e.citing + "'");
    const auto cited = find_pub(publications, e.cited);
    if (!cited) integrity("citation references unknown publication '" + e.cited + "'");
    if (*citing == *cited) integrity("publication '" + e.citing + "' cites itself");
    resolved.emplace_back(*citing, *cited);
  }
  citations.clear();
  citations.shrink_to_fit();
  std::sort(resolved.begin(), resolved.end());
  for (std::size_t i = 1; i < resolved.size(); ++i) {
    if (resolved[i] == resolved[i - 1]) {
      integrity("duplicate citation '" + publications[resolved[i].first].pub_id + "' -> '" +
                publications[resolved[i].second].pub_id + "'");
    }
  }

  const std::size_t n_pubs = publications.size();
  graph->edges.reserve(resolved.size());
  graph->edge_citing.reserve(resolved.size());
  graph->edge_cited.reserve(resolved.size());
  graph->incoming_offsets.assign(n_pubs + 1, 0);
  for (const auto& [citing, cited] : resolved) {
    graph->edges.push_back({publications[citing].pub_id, publications[cited].pub_id});
    graph->edge_citing.push_back(citing);
    graph->edge_cited.push_back(cited);
    ++graph->incoming_offsets[cited + 1];
  }
  std::partial_sum(graph->incoming_offsets.begin(), graph->incoming_offsets.end(),
                   graph->incoming_offsets.begin());
  graph->incoming_edges.resize(resolved.size());
  {
    std::vector<std::size_t> cursor(graph->incoming_offsets.begin(), graph->incoming_offsets.end() - 1);
    for (EdgeIndex e = 0; e < resolved.size(); ++e) {
      graph->incoming_edges[cursor[graph->edge_cited[e]]++] = e;
    }
  }

  // Intern author keys.
  std::vector<const AuthorKey*> keys;
  for (const auto& p : publications) {
    for (const auto& a : p.authors) keys.push_back(&a);
  }
  std::sort(keys.begin(), keys.end(), [](const AuthorKey* a, const AuthorKey* b) { return *a < *b; });
  keys.erase(std::unique(keys.begin(), keys.end(), [](const AuthorKey* a, const AuthorKey* b) { return *a == *b; }),
             keys.end());
  auto author_id = [&](const AuthorKey& k) {
    const auto it = std::lower_bound(keys.begin(), keys.end(), &k,
                                     [](const AuthorKey* a, const AuthorKey* b) { return *a < *b; });
    return static_cast<AuthorId>(it - keys.begin());
  };
  graph->author_offsets.reserve(n_pubs + 1);
  graph->author_offsets.push_back(0);
  for (const auto& p : publications) {
    const std::size_t start = graph->author_ids.size();
    for (const auto& a : p.authors) graph->author_ids.push_back(author_id(a));
    auto first = graph->author_ids.begin() + static_cast<std::ptrdiff_t>(start);
    std::sort(first, graph->author_ids.end());
    graph->author_ids.erase(std::unique(first, graph->author_ids.end()), graph->author_ids.end());
    graph->author_offsets.push_back(graph->author_ids.size());
  }
  keys.clear();
  graph->publications = std::move(publications);

  // Researchers.
  std::sort(researchers.begin(), researchers.end(),
            [](const ResearcherProfile& a, const ResearcherProfile& b) { return a.researcher_id < b.researcher_id; });
  Corpus corpus;
  corpus.researcher_keys_.reserve(researchers.size());
  corpus.owned_.reserve(researchers.size());
  for (std::size_t i = 0; i < researchers.size(); ++i) {
    auto& r = researchers[i];
    if (r.researcher_id.empty()) integrity("researcher with empty researcher_id");
    if (i > 0 && researchers[i - 1].researcher_id == r.researcher_id) {
      integrity("duplicate researcher id '" + r.researcher_id + "'");
    }
    AuthorKey key = normalize_author_name(r.display_name, options.name_matching);
    std::sort(r.publications.begin(), r.publications.end());
    std::vector<PubIndex> owned;
    owned.reserve(r.publications.size());
    for (std::size_t j = 0; j < r.publications.size(); ++j) {
      const auto& pid = r.publications[j];
      if (j > 0 && r.publications[j - 1] == pid) {
        integrity("researcher '" + r.researcher_id + "' lists publication '" + pid + "' twice");
      }
      const auto idx = find_pub(graph->publications, pid);
      if (!idx) integrity("researcher '" + r.researcher_id + "' references unknown publication '" + pid + "'");
      const auto& authors = graph->publications[*idx].authors;
      if (std::find(authors.begin(), authors.end(), key) == authors.end()) {
        integrity("researcher '" + r.researcher_id + "' (" + key.str() + ") is not an author of owned publication '" +
                  pid + "'");
      }
      owned.push_back(*idx);
    }
    corpus.researcher_keys_.push_back(std::move(key));
    corpus.owned_.push_back(std::move(owned));
  }
  corpus.researchers_ = std::move(researchers);
  corpus.graph_ = std::move(graph);
  return corpus;
}

std::span<const Publication> Corpus::publications() const noexcept { return graph_->publications; }

std::span<const CitationEdge> Corpus::citations() const noexcept { return graph_->edges; }

std::optional<std::size_t> Corpus::researcher_index(std::string_view id) const {
  const auto it = std::lower_bound(researchers_.begin(), researchers_.end(), id,
                                   [](const ResearcherProfile& r, std::string_view v) { return r.researcher_id < v; });
  if (it == researchers_.end() || it->researcher_id != id) return std::nullopt;
  return static_cast<std::size_t>(it - researchers_.begin());
}

std::size_t Corpus::require_researcher(std::string_view id) const {
  const auto idx = researcher_index(id);
  if (!idx) throw Error(ErrorCode::UnknownResearcher, "unknown researcher '" + std::string(id) + "'");
  return *idx;
}

std::optional<PubIndex> Corpus::publication_index(std::string_view pub_id) const {
  return find_pub(graph_->publications, pub_id);
}

const Publication& Corpus::publication(PubIndex pub) const { return graph_->publications[pub]; }

std::span<const EdgeIndex> Corpus::incoming(PubIndex pub) const {
  const auto b = graph_->incoming_offsets[pub];
  const auto e = graph_->incoming_offsets[pub + 1];
  return std::span<const EdgeIndex>(graph_->incoming_edges).subspan(b, e - b);
}

PubIndex Corpus::citing_of(EdgeIndex edge) const { return graph_->edge_citing[edge]; }

PubIndex Corpus::cited_of(EdgeIndex edge) const { return graph_->edge_cited[edge]; }

std::span<const AuthorId> Corpus::author_ids(PubIndex pub) const {
  const auto b = graph_->author_offsets[pub];
  const auto e = graph_->author_offsets[pub + 1];
  return std::span<const AuthorId>(graph_->author_ids).subspan(b, e - b);
}

NameMatching Corpus::name_matching() const noexcept { return graph_->name_matching; }

Corpus Corpus::select_researchers(std::span<const std::size_t> indices) const {
  Corpus out;
  out.graph_ = graph_;
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t i : sorted) {
    out.researchers_.push_back(researchers_.at(i));
    out.researcher_keys_.push_back(researcher_keys_[i]);
    out.owned_.push_back(owned_[i]);
  }
  return out;
}

bool operator==(const Corpus& a, const Corpus& b) {
  if (a.researchers_ != b.researchers_) return false;
  if (a.graph_ == b.graph_) return true;
  return a.graph_->publications == b.graph_->publications && a.graph_->edges == b.graph_->edges;
}

std::size_t citation_total(std::size_t researcher, const Corpus& corpus) {
  std::size_t total = 0;
  for (PubIndex p : corpus.owned_publications(researcher)) total += corpus.incoming(p).size();
  return total;
}

FilterResult filter_min_citations(const Corpus& corpus, std::size_t threshold) {
  std::vector<std::size_t> keep;
  const std::size_t n = corpus.researchers().size();
  for (std::size_t r = 0; r < n; ++r) {
    if (citation_total(r, corpus) >= threshold) keep.push_back(r);
  }
  return {corpus.select_researchers(keep), n - keep.size()};
}

FilterResult filter_by_keyword(const Corpus& corpus, std::string_view keyword) {
  const std::string wanted = trimmed_lower(keyword);
  std::vector<std::size_t> keep;
  const auto researchers = corpus.researchers();
  for (std::size_t r = 0; r < researchers.size(); ++r) {
    for (const auto& k : researchers[r].keywords) {
      if (trimmed_lower(k) == wanted) {
        keep.push_back(r);
        break;
      }
    }
  }
  return {corpus.select_researchers(keep), researchers.size() - keep.size()};
}

int first_publication_year(std::size_t researcher, const Corpus& corpus) {
  const auto owned = corpus.owned_publications(researcher);
  if (owned.empty()) {
    throw Error(ErrorCode::UndefinedCohort,
                "researcher '" + corpus.researchers()[researcher].researcher_id + "' owns no publications");
  }
  int year = corpus.publication(owned.front()).year;
  for (PubIndex p : owned) year = std::min(year, corpus.publication(p).year);
  return year;
}

int first_publication_year(std::string_view researcher_id, const Corpus& corpus) {
  return first_publication_year(corpus.require_researcher(researcher_id), corpus);
}

}  // namespace citestat
