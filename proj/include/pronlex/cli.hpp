#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pronlex {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitFormat = 2,
  kExitConstraint = 3,
};

/// Runs one `pronlex` subcommand. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pronlex
