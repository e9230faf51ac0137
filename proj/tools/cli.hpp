#pragma once

#include <iosfwd>

namespace bgbm::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kVerifyFailed = 3,
};

// Entry point of the `bgbm` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bgbm::cli
