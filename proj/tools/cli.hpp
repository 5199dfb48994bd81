#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ualg::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kInputError = 2 };

/// Runs one `ualg` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ualg::cli
