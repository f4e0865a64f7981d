#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace asymkit {

// Runs the command line (args excludes the program name). Returns the exit code:
// 0 success, 2 validation, 3 precondition, 4 resource cap.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* version_string();

}  // namespace asymkit
