#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace starkbeat::cli {

/// Run the command-line front end. `args` excludes the program name.
/// Results go to `out` (or the configured file), diagnostics to `err`
/// (level from the RESONANCE_LOG environment variable: error|info|debug).
/// Exit status: 0 success, 1 numerical failure, 2 usage/config error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace starkbeat::cli
