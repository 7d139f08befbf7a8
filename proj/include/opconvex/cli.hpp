#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace opconvex::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kPass = 0,
    kViolation = 1,
    kInputError = 2,
    kIndeterminate = 3,
};

/// Runs the command line `args` (without the program name). The report is
/// printed to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opconvex::cli
