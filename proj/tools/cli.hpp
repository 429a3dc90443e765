#ifndef EDUSEG_TOOLS_CLI_HPP
#define EDUSEG_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace eduseg::cli {

/// Full command-line front end. `args` excludes the program name.
/// Diagnostics go to `err`, data to `out` (unless routed to files by
/// flags). Returns the process exit code: 0 iff the run succeeded.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace eduseg::cli

#endif
