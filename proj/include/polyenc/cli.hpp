#pragma once

#include <iosfwd>

namespace polyenc {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitVerify = 3 };

/// Entry point of the `polyenc` tool: gendata, encode, train, eval, verify,
/// ablate. Output goes to the given streams so tests can capture it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polyenc
