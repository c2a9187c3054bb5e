#pragma once

// Command line driver for the m0n_cli tool.

#include <iostream>

namespace m0n::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kCapabilityError = 3, kVerificationFailure = 4 };

/// Runs the command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace m0n::cli
