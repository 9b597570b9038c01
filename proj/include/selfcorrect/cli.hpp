#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace selfcorrect {

// Dispatches a full command line (without argv[0]) to the analysis
// subcommands. Writes human-readable summaries to `out` and diagnostics to
// `err`. Exit codes: 0 ok, 2 usage, 3 input, 4 contract violation,
// 5 timeout.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace selfcorrect
