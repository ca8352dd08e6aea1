#pragma once

#include <ostream>

namespace catdb {

/// Exit codes of the command line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitInvalid = 1,
    kExitUsage = 2,
};

/// Entry point of the `catdb` tool, with its streams injectable for tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace catdb
