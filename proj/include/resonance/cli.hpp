#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace resonance::cli {

inline constexpr int kSchemaVersion = 1;

/// Parses argv, runs one subcommand and writes its records to --out (or to
/// `out`). Returns 0 on success, 2 on invalid input, 3 when a computation
/// ran out of budget or failed to converge.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace resonance::cli
