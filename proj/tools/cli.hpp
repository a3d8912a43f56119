#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ehd::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kSolverFailure = 2,
  kCheckFailure = 3,
};

/// Parses args (args[0] is the program name) and dispatches the subcommand.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ehd::cli
