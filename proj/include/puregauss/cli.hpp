#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace puregauss::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kError = 1,
  kNotPure = 2,
  kNotUnique = 3,
  kRankConditionFailed = 4,
};

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`; the return value is the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace puregauss::cli
