#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace impactlab::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kInputError = 2,
    kRedBaseline = 3,
    kIntegrityMismatch = 4,
    kGenerationFailure = 5,
};

/// Runs one subcommand. `args` excludes the program name. Artifacts go to
/// the -o path or `out`; diagnostics and timings go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace impactlab::cli
