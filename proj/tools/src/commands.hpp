#pragma once

#include <optional>
#include <string>

#include "genum/twolevel.hpp"

namespace genum::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kEmptyInput = 3,
  kInvariantViolation = 4,
};

/// Empty when h is a valid global histogram of n entries, otherwise the first
/// violated property.
std::optional<std::string> check_histogram(const GlobalHistogram& h);

/// Full command line, argv[0] included. Diagnostics go to stderr.
int run(int argc, const char* const* argv);

}  // namespace genum::cli
