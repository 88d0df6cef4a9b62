#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace humsim {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNoConvergence = 3 };

/// Entry point of the `humsim` command line tool.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace humsim
