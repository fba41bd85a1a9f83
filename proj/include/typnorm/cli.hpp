#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace typnorm {

/// Runs the command line `args` (without the program name).
/// Exit codes: 0 ok, 1 some claim failed, 2 bad input, 3 resource limit hit.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace typnorm
