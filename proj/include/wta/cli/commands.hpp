#pragma once

#include "wta/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wta::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitNumerical = 2,
    kExitGuard = 3,
};

int exit_code_for(ErrorCode code) noexcept;

/// Runs the command line (without the program name).  Everything the tool
/// prints goes to out and err, so tests can call this in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wta::cli
