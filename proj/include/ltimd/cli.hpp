#pragma once

#include <vector>
#include <string>

namespace ltimd {

// Exit codes of the command-line interface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 2;    // partial result / numerical failure
inline constexpr int kExitCheckFail = 3;  // a certificate check said no
inline constexpr int kExitUsage = 64;     // bad flags or unreadable input

// Runs the full CLI (argv[0] is the program name) and returns the exit code.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace ltimd
