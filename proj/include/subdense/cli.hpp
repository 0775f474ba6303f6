#pragma once

// Command-line front end. Exit codes: 0 ok, 1 numerical integrity failure
// (or a failed verify suite), 2 hypotheses unmet / argument outside the
// admissible range, 3 malformed model, profile or command line.

#include <iosfwd>
#include <string>
#include <vector>

namespace subdense {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int integrity = 1;
inline constexpr int capability = 2;
inline constexpr int spec = 3;
}  // namespace exit_code

/// "lo:hi:n" (n log-spaced points, endpoints included), "a,b,c" or a single number.
std::vector<double> parse_grid(const std::string& spec);

/// Runs one subcommand; `out` receives data unless --out names a file, `err` gets diagnostics.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace subdense
