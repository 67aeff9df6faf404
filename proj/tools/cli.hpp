#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvpure::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kNumericalFailure = 3,
};

/// Runs the command line `args` (args[0] is the program name), writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace mvpure::cli
