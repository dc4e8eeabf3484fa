#pragma once

#include <ostream>

namespace resil::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kValidationError = 2,
  kVerificationFailed = 3,
};

/// Runs the `resil` command line (metrics, curve, empirical, simulate,
/// verify) with the given arguments, writing to `out` and `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace resil::cli
