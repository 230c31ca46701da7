#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rankfarm::cli {

/// Stable exit codes.
enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kEmptyMatch = 3,
  kIoConfig = 4,
  kInternal = 5,
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Asks a running `serve` to shut down (safe from a signal handler thread).
void stop_serving();

}  // namespace rankfarm::cli
