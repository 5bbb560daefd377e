#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace ttda::cli {

enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kValidation = 2,
  kInfeasible = 3,
  kPartialSuccess = 4,
};

/// Parses and runs one command. Options resolve as flags, then TTDA_*
/// environment variables, then defaults. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

int run(int argc, const char* const* argv);

}  // namespace ttda::cli
