#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nsft {

// Runs the command line given argv-style arguments (program name excluded).
// Returns the process exit code: 0 success, 1 domain failure, 2 usage or
// I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace nsft
