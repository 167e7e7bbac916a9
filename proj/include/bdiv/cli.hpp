#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdiv {

// Runs the command-line tool on the given arguments (program name excluded).
// Returns the process exit code: 0 on success, 1 on an input error, 2 on an
// internal-consistency error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bdiv
