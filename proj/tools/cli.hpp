#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uckd::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 2,
    kNoRelevantFeatures = 3,
    kIoError = 4,
};

/// Runs the tool with `args` (args[0] is the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uckd::cli
