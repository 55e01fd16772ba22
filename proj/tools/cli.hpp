#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nrbl::cli {

/// Exit codes: 0 success, 1 domain or I/O error, 2 command-line parse error.
enum ExitCode : int { kOk = 0, kDomainError = 1, kParseError = 2 };

/// Runs the tool with `args` (program name excluded). Primary output goes to
/// `out` unless a subcommand writes files; errors are emitted on `err` as a
/// one-line JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrbl::cli
