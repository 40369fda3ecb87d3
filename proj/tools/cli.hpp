#pragma once

#include <string>
#include <vector>

namespace oriq::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kDegenerate = 3 };

/// Runs one command line (args[0] is the program name) and returns the
/// process exit code. Reports go to the --out file or stdout; diagnostics
/// go to stderr.
int run(const std::vector<std::string>& args);

}  // namespace oriq::cli
