#include "citestat/author_name.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "citestat/errors.hpp"

namespace citestat {
namespace {

constexpr char kSeparator = '|';

bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;
}

// Lowercases, turns structural punctuation into token breaks, and removes the
// rest. Latin-1 capitals (U+00C0..U+00DE) are folded; other non-ASCII letters
// pass through untouched.
std::string fold(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (c < 0x80) {
      if (c >= 'A' && c <= 'Z') {
        out.push_back(static_cast<char>(c - 'A' + 'a'));
      } else if (is_ascii_alnum(c)) {
        out.push_back(static_cast<char>(c));
      } else if (c == ',') {
        out.push_back(',');
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '.') {
        out.push_back(' ');
      }
      ++i;
      continue;
    }
    const std::size_t len = std::min(utf8_length(c), raw.size() - i);
    if (len == 2 && c == 0xC2) {
      // Latin-1 punctuation block; NBSP separates tokens.
      if (static_cast<unsigned char>(raw[i + 1]) == 0xA0) out.push_back(' ');
    } else if (len == 2 && c == 0xC3) {
      auto next = static_cast<unsigned char>(raw[i + 1]);
      if (next >= 0x80 && next <= 0x9E && next != 0x97) next += 0x20;
      if (next != 0x97 && next != 0xB7) {
        out.push_back(static_cast<char>(c));
        out.push_back(static_cast<char>(next));
      }
    } else if (len == 3 && c == 0xE2 &&
               (static_cast<unsigned char>(raw[i + 1]) == 0x80 ||
                static_cast<unsigned char>(raw[i + 1]) == 0x81)) {
      // General punctuation (curly quotes, dashes, thin spaces): dropped.
    } else {
      out.append(raw.substr(i, len));
    }
    i += len;
  }
  return out;
}

std::vector<std::string> tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != ',') ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_suffix(std::string_view token) {
  static constexpr std::array<std::string_view, 5> kSuffixes{"jr", "sr", "ii", "iii", "iv"};
  return std::find(kSuffixes.begin(), kSuffixes.end(), token) != kSuffixes.end();
}

void drop_trailing_suffix(std::vector<std::string>& toks) {
  while (toks.size() > 1 && is_suffix(toks.back())) toks.pop_back();
}

bool is_canonical_part(std::string_view part) {
  for (unsigned char c : part) {
    if (c < 0x80 && !((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) return false;
  }
  return true;
}

}  // namespace

AuthorKey AuthorKey::from_canonical(std::string_view canonical) {
  const auto sep = canonical.find(kSeparator);
  if (sep == std::string_view::npos || canonical.find(kSeparator, sep + 1) != std::string_view::npos) {
    throw Error(ErrorCode::InvalidName,
                "author key '" + std::string(canonical) + "' must contain exactly one '|'");
  }
  const auto given = canonical.substr(0, sep);
  const auto surname = canonical.substr(sep + 1);
  if (surname.empty() || !is_canonical_part(given) || !is_canonical_part(surname)) {
    throw Error(ErrorCode::InvalidName, "author key '" + std::string(canonical) + "' is not canonical");
  }
  return AuthorKey(std::string(canonical));
}

std::string_view AuthorKey::given() const {
  std::string_view s = canonical_;
  return s.substr(0, s.find(kSeparator));
}

std::string_view AuthorKey::surname() const {
  std::string_view s = canonical_;
  const auto sep = s.find(kSeparator);
  return sep == std::string_view::npos ? std::string_view{} : s.substr(sep + 1);
}

AuthorKey normalize_author_name(std::string_view raw, NameMatching matching) {
  const std::string folded = fold(raw);
  const auto comma = folded.find(',');

  std::string surname;
  std::string given;
  if (comma != std::string::npos) {
    auto surname_tokens = tokens(std::string_view(folded).substr(0, comma));
    auto given_tokens = tokens(std::string_view(folded).substr(comma + 1));
    // "Smith, Jr., John": the suffix sits between the commas.
    while (!given_tokens.empty() && is_suffix(given_tokens.front()) && given_tokens.size() > 1) {
      given_tokens.erase(given_tokens.begin());
    }
    drop_trailing_suffix(surname_tokens);
    if (!surname_tokens.empty()) surname = surname_tokens.back();
    if (!given_tokens.empty()) given = given_tokens.front();
  } else {
    auto toks = tokens(folded);
    drop_trailing_suffix(toks);
    if (!toks.empty()) surname = toks.back();
    if (toks.size() >= 2) given = toks.front();
  }

  if (surname.empty()) {
    throw Error(ErrorCode::InvalidName, "author name '" + std::string(raw) + "' has no usable surname");
  }
  if (matching == NameMatching::FirstInitial && !given.empty()) {
    given.resize(std::min(given.size(), utf8_length(static_cast<unsigned char>(given.front()))));
  }
  return AuthorKey(given + kSeparator + surname);
}

std::string render_author_key(const AuthorKey& key) {
  std::string out(key.surname());
  if (!key.given().empty()) {
    out += ", ";
    out += key.given();
  }
  return out;
}

}  // namespace citestat
