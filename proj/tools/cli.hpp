// Command-line front end. `run_cli` is the whole program minus process
// plumbing so it can be driven in-process by the test-suite.
#ifndef TIADC_TOOLS_CLI_HPP
#define TIADC_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace tiadc::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kNonConvergence = 2 };

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tiadc::cli

#endif // TIADC_TOOLS_CLI_HPP
