#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace relu_knots::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kIneligible = 3;
inline constexpr int kOracleMismatch = 4;
inline constexpr int kDepthError = 5;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relu_knots::cli
