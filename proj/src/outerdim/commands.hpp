#pragma once

#include <string>
#include <vector>

#include "outerdim/serialize.hpp"

namespace outerdim {

enum ExitCode : int { ExitOk = 0, ExitVerification = 1, ExitUsage = 2, ExitInfeasible = 3 };

struct CommandSpec {
  std::string name;
  std::string summary;
  std::vector<std::string> keys;  // accepted config keys
};

const std::vector<CommandSpec>& command_specs();
const CommandSpec* find_command(const std::string& name);

struct CommandResult {
  Json report;
  std::string csv;
  int exit_code = ExitOk;
};

// Runs one subcommand. Config values may be JSON numbers or strings; lists
// may be arrays or comma-separated strings. Never throws for bad input:
// errors are reported in the JSON with the matching exit code.
CommandResult run_command(const std::string& name, const Json& config);

std::string usage_text();

}  // namespace outerdim
