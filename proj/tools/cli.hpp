#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lrdual::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs the command line `args` (without the program name). Returns the process exit code:
/// 0 success, 1 validation, 2 domain/infeasibility, 3 divergence, 4 I/O.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrdual::cli
