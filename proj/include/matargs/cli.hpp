#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace matargs {

// Runs one command line (arguments without the program name) and returns the
// process exit code: 0 success or pass, 1 verification fail, 2 usage or
// domain error, 3 inconclusive. All output goes to the given streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace matargs
