#pragma once

#include <string>
#include <vector>

namespace arnet {

/// Runs the command line front end. Returns the process exit code:
/// 0 success, 2 usage or input error, 3 numerical failure.
int cli_run(int argc, const char* const* argv);

/// Convenience overload for tests; args exclude the program name.
int cli_run(const std::vector<std::string>& args);

}  // namespace arnet
