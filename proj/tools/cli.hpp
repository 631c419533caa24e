#pragma once

#include <iosfwd>

namespace mvfix::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kIoOrParse = 1,
    kPrecondition = 2,
    kCounterexample = 3,
};

/// Runs the command line with argv[0] as the program name. JSON reports go
/// to `out`; diagnostics and decorated tables go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mvfix::cli
