#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "citestat/corpus.hpp"

namespace testing_support {

// Assembles corpus documents in the interchange format so tests go through
// the real parser.
class CorpusBuilder {
 public:
  CorpusBuilder& researcher(const std::string& id, const std::string& name, const std::string& country,
                            const std::string& gender, std::vector<std::string> pubs,
                            std::vector<std::string> keywords = {}) {
    nlohmann::json r = {{"researcher_id", id},  {"display_name", name},  {"country", country},
                        {"gender", gender},     {"publications", pubs}};
    if (!keywords.empty()) r["keywords"] = keywords;
    researchers_.push_back(std::move(r));
    return *this;
  }

  CorpusBuilder& publication(const std::string& id, int year, std::vector<std::string> authors) {
    publications_.push_back({{"pub_id", id}, {"title", "Paper " + id}, {"year", year}, {"authors", authors}});
    return *this;
  }

  CorpusBuilder& cite(const std::string& citing, const std::string& cited) {
    citations_.push_back({{"citing", citing}, {"cited", cited}});
    return *this;
  }

  std::string json() const {
    nlohmann::json doc = {{"researchers", nlohmann::json::array()},
                          {"publications", nlohmann::json::array()},
                          {"citations", nlohmann::json::array()}};
    for (const auto& r : researchers_) doc["researchers"].push_back(r);
    for (const auto& p : publications_) doc["publications"].push_back(p);
    for (const auto& c : citations_) doc["citations"].push_back(c);
    return doc.dump(1);
  }

  citestat::Corpus build(const citestat::CorpusOptions& options = {}) const {
    return citestat::parse_corpus(json(), options);
  }

 private:
  std::vector<nlohmann::json> researchers_;
  std::vector<nlohmann::json> publications_;
  std::vector<nlohmann::json> citations_;
};

}  // namespace testing_support
