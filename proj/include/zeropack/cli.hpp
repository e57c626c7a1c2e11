#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zeropack::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kNotConverged = 2,
  kIoError = 3,
  kUsageError = 4,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out is given; diagnostics and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c" into doubles; throws std::invalid_argument on bad input.
std::vector<double> parse_list(const std::string& text);

}  // namespace zeropack::cli
