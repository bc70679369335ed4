#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace saferisk::cli {

enum ExitCode
{
  kSuccess = 0,
  kValidationError = 1,
  kIoError = 2
};

/// Runs the command line. `args` excludes the program name. Regular output
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace saferisk::cli
