#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blockgrader {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,       // success; for `grade`, an exact submission
    kExitFailure = 1,  // validation failure, inexact grade, cap exceeded, stats row error
    kExitUsage = 2,    // bad arguments, unreadable input, unparsable submission or problem
};

/// Runs the instructor CLI. `args[0]` is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blockgrader
