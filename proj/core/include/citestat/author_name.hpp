#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace citestat {

enum class NameMatching {
  FirstInitial,   // "f|couto"
  FullGivenName,  // "francisco|couto"
};

/// Canonical author identity, "given|surname". Lowercase, no punctuation
/// other than the single separator. The given part may be empty for
/// mononymous authors.
class AuthorKey {
 public:
  AuthorKey() = default;

  /// Accepts an already-canonical string; throws InvalidName otherwise.
  static AuthorKey from_canonical(std::string_view canonical);

  const std::string& str() const noexcept { return canonical_; }
  std::string_view given() const;
  std::string_view surname() const;

  friend bool operator==(const AuthorKey&, const AuthorKey&) = default;
  friend auto operator<=>(const AuthorKey&, const AuthorKey&) = default;

 private:
  explicit AuthorKey(std::string canonical) : canonical_(std::move(canonical)) {}
  friend AuthorKey normalize_author_name(std::string_view, NameMatching);

  std::string canonical_;
};

/// Maps "Surname, Given M." and "Given M Surname" forms onto the same key.
/// Throws Error(InvalidName) when nothing usable remains.
AuthorKey normalize_author_name(std::string_view raw,
                                NameMatching matching = NameMatching::FirstInitial);

/// Human-readable form; normalize_author_name(render_author_key(k)) == k.
std::string render_author_key(const AuthorKey& key);

}  // namespace citestat
