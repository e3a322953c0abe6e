// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_CLI_COMMANDS_HPP_
#define FILTERNET_CLI_COMMANDS_HPP_

#include <exception>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "filternet/cli/run_config.hpp"

namespace filternet::cli {

inline constexpr std::string_view kVersion = "1.0.0";

// Exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUnknownCommand = 2,
  kExitBadConfig = 3,
  kExitMissingInput = 4,
};

const std::vector<std::string>& command_names();

struct Invocation {
  std::string command;
  // Settings given explicitly (config file merged with overrides). Commands
  // that load a checkpoint compare these against it.
  nlohmann::json explicit_settings = nlohmann::json::object();
  RunConfig config;
  bool quiet = false;
};

// Runs one command. Progress goes to `log` unless quiet; CSV metrics go to
// `out` and the last line written is always a CSV row. Writes run.json into
// eval.out_dir. Errors propagate as filternet::Error subclasses.
void run_command(const Invocation& invocation, std::ostream& out,
                 std::ostream& log);

// Maps an exception thrown by run_command to an exit code.
int exit_code_for(const std::exception& error);

// One line, `error code=<n> kind=<kind>: <message>`, newlines flattened.
std::string error_line(const std::exception& error);

}  // namespace filternet::cli

#endif  // FILTERNET_CLI_COMMANDS_HPP_
