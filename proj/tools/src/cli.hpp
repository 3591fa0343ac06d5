#pragma once

#include <iosfwd>

namespace safe::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitClustering = 3,
  kExitAnalysis = 4,
  kExitSelection = 5,
};

/// Entry point shared by the `safe` binary and the tests. Messages go to
/// `out` / `err` instead of the process streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace safe::cli
