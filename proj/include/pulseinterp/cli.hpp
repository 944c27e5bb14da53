#pragma once

#include <iosfwd>

namespace pulseinterp {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitBadArgs = 2,
  kExitDomain = 3,
  kExitIo = 4,
};

/// Entry point of the pulseinterp tool: subcommands calibrate, evaluate, interpolate
/// and sweep. Tables and reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pulseinterp
