#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace fibft::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNonConvergence = 2, kDominanceFailure = 3 };

/// key=value lines; '#' starts a comment. Throws std::runtime_error on
/// unreadable files or malformed lines.
std::map<std::string, std::string> read_config(const std::string& path);

/// Entry point of the fibft tool. Reports go to `out` unless --out names a
/// file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fibft::cli
