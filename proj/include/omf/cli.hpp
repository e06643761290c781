#pragma once

// Command-line front end.  run_cli is the whole program minus process
// plumbing, so tests can drive it in-process.

#include <ostream>
#include <string>
#include <vector>

namespace omf {

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_inconclusive = 2, exit_usage = 3 };

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace omf
