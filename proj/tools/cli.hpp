#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tapewrap::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitUsage = 2,
  kExitIncomplete = 3,
};

/// Runs one command line (program name excluded). Logging goes to stderr and
/// follows TAPEWRAP_LOG (error|warn|info|debug).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tapewrap::cli
