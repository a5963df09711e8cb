#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pbcurves {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitUsage = 2 };

/// Runs the command-line tool on `args` (without the program name). Tables
/// and reports go to `out`, messages to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbcurves
