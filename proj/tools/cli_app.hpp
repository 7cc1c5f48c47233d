#pragma once

#include <string>
#include <vector>

namespace locsnn::cli {

// Exit codes, one class per failure family so scripts can branch on them.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kValidationError = 3;
inline constexpr int kIoError = 4;
inline constexpr int kTrainingError = 5;

/// Runs the full command-line app on `args` (without the program name).
/// Never throws; failures are printed to stderr and mapped to the codes
/// above.
int run(const std::vector<std::string>& args);

int run(int argc, char** argv);

}  // namespace locsnn::cli
