#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace crpsbin::cli {

// Runs one invocation; args excludes the program name. Returns the exit
// status: 0 on success, 2 on any error (message written to err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crpsbin::cli
