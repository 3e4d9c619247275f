#pragma once

// Batch command-line front end. JSON reports go to `out`, a one-line human
// summary and diagnostics go to `err`.
//
// Exit status: 0 pass/accept, 1 refuted/reject, 2 inconclusive,
// 3 usage, parse or premise-violation error.

#include <iosfwd>
#include <string>
#include <vector>

namespace rankkit {

inline constexpr int kExitPass = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitError = 3;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankkit
