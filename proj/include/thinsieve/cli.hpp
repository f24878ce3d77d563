#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace thinsieve {

enum ExitCode : int {
  kExitPass = 0,
  kExitInternal = 1,
  kExitFalsified = 2,
  kExitBudget = 3,
  kExitBadInput = 4,
};

/// Runs the command line (without the program name) and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thinsieve
