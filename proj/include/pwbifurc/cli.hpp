#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace pwbifurc {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitRegime = 3,
  kExitIo = 4,
};

/// Runs the command line `args` (without the program name) and returns the
/// process exit status. Normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pwbifurc
