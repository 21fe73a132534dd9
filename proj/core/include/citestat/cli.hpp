#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace citestat {

/// Entry point of the citestat tool. `args` excludes the program name.
/// Exit codes: 0 success, 1 usage, 2 unreadable input, 3 malformed corpus,
/// 4 analysis failure. Failures print one "CODE: message" line to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace citestat
