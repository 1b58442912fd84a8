#pragma once

#include <iosfwd>

namespace kahler {

enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailure = 1,
  kExitInternalError = 2,
  kExitInputRejected = 3,
};

/// kahlerlab selftest | classify | generate. Reports go to `out`,
/// diagnostics to `err`; `in` is read for the scenario path "-".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, std::istream& in);

const char* tool_version();

}  // namespace kahler
