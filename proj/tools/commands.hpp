#ifndef OWABMS_TOOLS_COMMANDS_HPP
#define OWABMS_TOOLS_COMMANDS_HPP

#include <ostream>

namespace owabms::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 1,
    kModelError = 2,
    kAuditFailure = 3,
};

// Entry point behind the `owabms` binary; subcommands table, premium, fit, audit, export-model.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace owabms::cli

#endif  // OWABMS_TOOLS_COMMANDS_HPP
