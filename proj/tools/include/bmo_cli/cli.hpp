#pragma once

#include <iosfwd>

namespace bmo::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Entry point of the `bmo` tool; writes results to `out` (or to the file
/// given by --output) and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bmo::cli
