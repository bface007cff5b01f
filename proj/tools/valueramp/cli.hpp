#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace valueramp::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
/// A check failed, or a parse/contract error in the inputs.
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;
/// The input is outside what the command supports (e.g. nondeterministic).
inline constexpr int kUnsupported = 3;

/// Runs one command line; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace valueramp::cli
