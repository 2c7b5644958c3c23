#pragma once

#include <iosfwd>

namespace paulisim::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;   // bad flags, unreadable files
inline constexpr int kExitParse = 2;   // circuit or noise file syntax
inline constexpr int kExitConfig = 3;  // invalid parameter values
inline constexpr int kExitSize = 4;    // problem too large for the command

// Entry point for the paulisim tool. Reports go to `out` unless --output is
// given; diagnostics go to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace paulisim::cli
