#pragma once

#include <iosfwd>

namespace sdoc {

inline constexpr int exit_ok = 0;
inline constexpr int exit_rejected = 1;
inline constexpr int exit_usage = 2;

/// Entry point of the `sdoc` tool. Input named "-" is read from `in`;
/// documents without an output file go to `out`; diagnostics go to `err`.
///
/// Returns exit_ok, exit_rejected when a verified document is rejected, or
/// exit_usage for bad arguments, unreadable input and any other failure.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace sdoc
