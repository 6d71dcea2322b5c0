#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hybrid::cli {

enum Exit { Ok = 0, CheckFailed = 1, Usage = 2 };

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hybrid::cli
