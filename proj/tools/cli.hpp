#pragma once

#include <iosfwd>

namespace minklog::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotConverged = 2, kCheckFailed = 3 };

// Full command-line entry point; writes reports to `out` (or --out) and
// messages to `err`. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minklog::cli
