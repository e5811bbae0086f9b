#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace distweyl::cli {

enum ExitCode { Success = 0, NumericalFailure = 1, ConfigError = 2 };

/// Runs one command line (without the program name) and returns the exit
/// code. Results go to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace distweyl::cli
