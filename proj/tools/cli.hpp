#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cxg::cli {

/// Runs one subcommand. `args` excludes the program name. Returns the exit
/// status: 0 on success, 1 on engine errors, 2 on usage and parse errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cxg::cli
