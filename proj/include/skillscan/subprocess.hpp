#pragma once

#include <string>

namespace skillscan {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

/// Runs `command` through the shell, feeding `input` on stdin and capturing
/// stdout. stderr passes through. Returns exit code -1 when the command
/// could not be started.
CommandResult run_command(const std::string& command, const std::string& input);

}  // namespace skillscan
