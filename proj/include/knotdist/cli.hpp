#pragma once

#include <iosfwd>

namespace knotdist {

/// Process exit codes of the `distort` tool.
enum ExitCode : int {
  kExitOk = 0,
  /// A verify suite found a violated inequality.
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitGeometry = 3,
  kExitDomain = 4,
};

/// Runs the `distort` command line (argv[0] is the program name), writing
/// results to `out` and diagnostics and manifests to `err`. Returns the
/// process exit code; never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace knotdist
