#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace parley::cli {

enum ExitCode { kOk = 0, kUsage = 1, kModel = 2, kNonConvergence = 3 };

/// Runs the `parley` command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

} // namespace parley::cli
