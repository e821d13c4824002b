#pragma once

#include <iosfwd>

namespace radpi::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kParseError = 2,
  kDeadlock = 3,
  kScriptMismatch = 4,
  kUsage = 64,
};

/// Entry point of the radpi tool. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace radpi::cli
