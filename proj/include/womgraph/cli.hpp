#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace womgraph {

// Runs one subcommand. `args` excludes the program name. Results go to --out when
// given (written atomically) and to `out` otherwise; diagnostics go to `err`.
// Returns the process exit status.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace womgraph
