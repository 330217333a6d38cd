#pragma once

#include <ostream>

namespace fefet {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // bad flags or config
  kExitInput = 2,  // unreadable or malformed input data
  kExitInfeasible = 3,
};

/// Entry point of the fefetsim tool. Reports go to --out or `out`,
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fefet
