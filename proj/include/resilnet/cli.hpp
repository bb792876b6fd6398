#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace resilnet {

// Dispatches one CLI invocation (args excludes the program name) and
// returns the process exit code: 0 success, 1 usage error, 2 invalid
// input or IO failure, 3 numerical/statistical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace resilnet
