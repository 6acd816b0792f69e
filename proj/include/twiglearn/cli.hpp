#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace twiglearn::cli {

enum ExitCode : int { ok = 0, no_result = 1, usage_error = 2 };

// Runs the command line tool; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twiglearn::cli
