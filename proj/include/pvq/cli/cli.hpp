#pragma once
// Command-line front end: subcommand dispatch, flag validation, on-disk
// format glue, structured JSON reports and stable exit codes.

#include <iosfwd>
#include <string>
#include <vector>

namespace pvq::cli {

inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;           // bad flags or parameter preconditions
inline constexpr int kFormatError = 3;           // unreadable or malformed input files
inline constexpr int kVerificationFailure = 4;   // a requested check did not pass
inline constexpr int kProtocolFailure = 5;       // the two-endpoint session aborted

// Runs one command line (program name excluded). Reports go to `out`,
// diagnostics to `err`; exceptions are mapped to the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pvq::cli
