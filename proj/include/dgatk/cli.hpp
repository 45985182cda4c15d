#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dgatk {

/// Exit codes of the command-line tool.
enum ExitCode { kOk = 0, kHypothesis = 1, kUsage = 2, kResource = 3 };

/// Runs `dga` with the given arguments (program name excluded); the report goes to `out`,
/// diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dgatk
