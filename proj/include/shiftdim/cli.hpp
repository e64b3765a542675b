#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace shiftdim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerificationFailed = 2;

/// Runs one subcommand. The JSON report goes to out (and to --out when
/// given); diagnostics go to err. Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shiftdim::cli
