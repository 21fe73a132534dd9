#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace citestat {

// Every failure the library raises carries one of these codes. The CLI maps
// them onto process exit codes and prints "code: message" diagnostics.
enum class ErrorCode {
  InvalidArgument,
  InvalidName,
  Io,
  Syntax,
  Schema,
  Integrity,
  UnknownResearcher,
  UndefinedCohort,
  UndefinedProportion,
  UndefinedCovariate,
  RankDeficient,
  Infeasible,
  InsufficientData,
};

std::string_view to_string(ErrorCode code);

// Process exit code for the CLI: 2 for unreadable input, 3 for a malformed
// corpus, 4 for analysis failures.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> byte_offset = std::nullopt)
      : std::runtime_error(message), code_(code), byte_offset_(byte_offset) {}

  ErrorCode code() const noexcept { return code_; }

  /// Offset into the input document for syntax errors.
  std::optional<std::size_t> byte_offset() const noexcept { return byte_offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> byte_offset_;
};

}  // namespace citestat
