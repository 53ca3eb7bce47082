#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vadminer::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,          // bad flags or missing required option
    kMissingFile = 2,
    kSchemaError = 3,    // corpus lines failed validation
    kInvalidInput = 4,   // lexicon, generator spec or config rejected
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace vadminer::cli
