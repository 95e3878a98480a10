#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace permrd {

/// Runs the command-line tool. `args` excludes the program name. Returns the
/// process exit code: 0 on success, 1 for input or computation errors, 2 for
/// usage errors.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace permrd
