// Command-line front end. `run` never throws: diagnostics go to `err` and
// the result is an exit code (0 ok, 1 domain/scenario/query error, 2 usage).

#ifndef NESS_TOOLS_CLI_H_
#define NESS_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ness::cli {

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ness::cli

#endif  // NESS_TOOLS_CLI_H_
