#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace voxcast::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitEnvironment = 3,
};

/// Runs the voxcast command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace voxcast::cli
