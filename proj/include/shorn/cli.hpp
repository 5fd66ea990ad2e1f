#pragma once

#include <iosfwd>

namespace shorn::cli {

/// Exit codes.
enum Exit : int { Ok = 0, Infeasible = 1, Malformed = 2, Numerical = 3 };

/// Runs the `shorn` command line. Reports are key=value lines with optional
/// CSV blocks on `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace shorn::cli
