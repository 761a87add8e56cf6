#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace letcc {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,   ///< bad flags, config or input file
  kExitDecodeFailure = 2,
};

/// Runs the `letcc` command line. `args` excludes the program name.
/// Machine-readable output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace letcc
