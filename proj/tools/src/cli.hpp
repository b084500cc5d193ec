#pragma once

#include <string>
#include <vector>

namespace oscsync::cli {

/// Exit codes: 0 success, 1 validation error, 2 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNumerical = 2;

/// Full command line without the program name, e.g.
/// {"stability", "--config", "example4.json", "--out", "run1"}.
int run(const std::vector<std::string>& args);

}  // namespace oscsync::cli
