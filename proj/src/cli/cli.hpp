#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace amlnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

/// Runs one command line (args excludes the program name) and returns the
/// process exit code. Diagnostics go to `err`, progress to `out`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace amlnet::cli
