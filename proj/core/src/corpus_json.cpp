#include <fstream>
#include <sstream>

#include <json.hpp>

#include "citestat/corpus.hpp"
#include "citestat/errors.hpp"

namespace citestat {
namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Schema, path + ": " + what);
}

const json& field(const json& obj, const char* name, const std::string& path) {
  const auto it = obj.find(name);
  if (it == obj.end()) schema(path, std::string("missing field \"") + name + "\"");
  return *it;
}

std::string string_field(const json& obj, const char* name, const std::string& path) {
  const auto& v = field(obj, name, path);
  if (!v.is_string()) schema(path + "." + name, "expected string");
  return v.get<std::string>();
}

std::vector<std::string> string_array(const json& v, const std::string& path) {
  if (!v.is_array()) schema(path, "expected array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) schema(path + "[" + std::to_string(i) + "]", "expected string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

const json& top_array(const json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) schema("$", std::string("missing top-level array \"") + name + "\"");
  if (!it->is_array()) schema(std::string("$.") + name, "expected array");
  return *it;
}

}  // namespace

Corpus parse_corpus(std::string_view bytes, const CorpusOptions& options) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Syntax, std::string("corpus is not valid JSON: ") + e.what(),
                e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!doc.is_object()) schema("$", "expected a JSON object");

  std::vector<Publication> pubs;
  {
    const auto& arr = top_array(doc, "publications");
    pubs.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "$.publications[" + std::to_string(i) + "]";
      const auto& p = arr[i];
      if (!p.is_object()) schema(path, "expected object");
      Publication pub;
      pub.pub_id = string_field(p, "pub_id", path);
      pub.title = string_field(p, "title", path);
      const auto& year = field(p, "year", path);
      if (!year.is_number_integer()) schema(path + ".year", "expected integer");
      pub.year = year.get<int>();
      const auto raw_authors = string_array(field(p, "authors", path), path + ".authors");
      pub.authors.reserve(raw_authors.size());
      for (std::size_t a = 0; a < raw_authors.size(); ++a) {
        try {
          pub.authors.push_back(normalize_author_name(raw_authors[a], options.name_matching));
        } catch (const Error& e) {
          throw Error(e.code(), path + ".authors[" + std::to_string(a) + "]: " + e.what());
        }
      }
      pubs.push_back(std::move(pub));
    }
  }

  std::vector<CitationEdge> edges;
  {
    const auto& arr = top_array(doc, "citations");
    edges.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "$.citations[" + std::to_string(i) + "]";
      const auto& c = arr[i];
      if (!c.is_object()) schema(path, "expected object");
      edges.push_back({string_field(c, "citing", path), string_field(c, "cited", path)});
    }
  }

  std::vector<ResearcherProfile> researchers;
  {
    const auto& arr = top_array(doc, "researchers");
    researchers.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "$.researchers[" + std::to_string(i) + "]";
      const auto& r = arr[i];
      if (!r.is_object()) schema(path, "expected object");
      ResearcherProfile prof;
      prof.researcher_id = string_field(r, "researcher_id", path);
      prof.display_name = string_field(r, "display_name", path);
      prof.country = string_field(r, "country", path);
      const auto gender_text = string_field(r, "gender", path);
      const auto gender = parse_gender(gender_text);
      if (!gender) schema(path + ".gender", "expected one of male, female, unknown; got '" + gender_text + "'");
      prof.gender = *gender;
      prof.publications = string_array(field(r, "publications", path), path + ".publications");
      if (const auto kw = r.find("keywords"); kw != r.end()) {
        prof.keywords = string_array(*kw, path + ".keywords");
      }
      researchers.push_back(std::move(prof));
    }
  }
  doc = json();

  return Corpus::build(std::move(researchers), std::move(pubs), std::move(edges), options);
}

std::string serialize_corpus(const Corpus& corpus) {
  // One record per line keeps large corpora diffable.
  std::string out = "{\n\"researchers\": [";
  bool first = true;
  for (const auto& r : corpus.researchers()) {
    json j = {{"researcher_id", r.researcher_id},
              {"display_name", r.display_name},
              {"country", r.country},
              {"gender", std::string(to_string(r.gender))},
              {"publications", r.publications},
              {"keywords", r.keywords}};
    out += first ? "\n" : ",\n";
    out += j.dump();
    first = false;
  }
  out += "\n],\n\"publications\": [";
  first = true;
  for (const auto& p : corpus.publications()) {
    json authors = json::array();
    for (const auto& a : p.authors) authors.push_back(render_author_key(a));
    json j = {{"pub_id", p.pub_id}, {"title", p.title}, {"year", p.year}, {"authors", std::move(authors)}};
    out += first ? "\n" : ",\n";
    out += j.dump();
    first = false;
  }
  out += "\n],\n\"citations\": [";
  first = true;
  for (const auto& e : corpus.citations()) {
    out += first ? "\n" : ",\n";
    out += json{{"citing", e.citing}, {"cited", e.cited}}.dump();
    first = false;
  }
  out += "\n]\n}\n";
  return out;
}

Corpus load_corpus_file(const std::string& path, const CorpusOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read corpus '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "error while reading corpus '" + path + "'");
  return parse_corpus(ss.str(), options);
}

}  // namespace citestat
