#pragma once

#include <iostream>

namespace foilspace::cli {

// Whole command line as a function, so tests can drive it in-process.
// Returns the process exit code: 0 success, 1 library error, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace foilspace::cli
