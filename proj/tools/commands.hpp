#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddoif::cli {

/// Process exit statuses. Values are part of the command-line contract.
enum ExitStatus : int {
    kOk = 0,
    kFindings = 1,   // validation or verification errors found
    kMalformed = 2,  // input could not be decoded or parsed
    kUsage = 3,      // I/O or usage error
};

/// Runs the `ddoif` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ddoif::cli
