#pragma once

#include <iosfwd>

namespace periodfn::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitHypothesis = 3,
  kExitNumeric = 4,
};

/// Entry point of the `periodfn` tool. Writes results to `out`; on failure
/// writes one line `error: <kind>: <reason>` to `err` and returns the exit
/// code for that failure kind.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace periodfn::cli
