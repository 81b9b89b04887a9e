#ifndef QWP_CLI_HPP
#define QWP_CLI_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qwp {

// Settings shared by the subcommands, resolved from flags and the QWP_TOL
// environment variable (which overrides the --tol default only).
struct RunConfig {
  double psdTol = 1e-9;
  double tol = 1e-10;  // loop and recursion truncation tolerance
  int maxIter = 100000;
  std::uint64_t seed = 0x5eedULL;
  std::string format = "json";  // json | text
  std::string outPath;          // empty writes to the output stream
};

// Parses and executes one command line (without the program name) and
// returns the process exit code:
//   0 success (for `check`, a fail verdict is still a computed result)
//   2 SyntaxError / ScopeError / TypeError / ElaborationError
//   3 IO, format, signature, threshold-free validation failures
//   4 NonConvergent / NonMonotone
//   5 InvalidThreshold
// Command output goes to `out`; every failure prints a JSON error body
// {"error": <code>, "message": <text>} regardless of --format.
int runCli(std::vector<std::string> args, std::ostream& out);

}  // namespace qwp

#endif
