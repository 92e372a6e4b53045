#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iplab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitDefinitive = 0,
  kExitUsage = 1,
  kExitUndecided = 2,  // not found within bounds, or budget exhausted
};

/// Runs one command line (args[0] is the program name). Result documents go
/// to `out` (or to --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iplab
