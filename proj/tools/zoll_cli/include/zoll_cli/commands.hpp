// Copyright 2026 The zoll-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZOLL_CLI_COMMANDS_HPP_
#define ZOLL_CLI_COMMANDS_HPP_

#include <string>
#include <vector>

#include "zoll_cli/config.hpp"

namespace zoll::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitInternal = 1,
  kExitTolerance = 2,
  kExitConfig = 3,
};

struct CommandOutput {
  int exit_code = kExitPass;
  std::vector<std::string> files;     // written, relative to out_dir
  std::vector<std::string> failures;  // one line per violated tolerance
};

// Runs cfg.command and writes its CSV or JSON file into cfg.out_dir.
// Throws ConfigError for configurations that only fail once interpreted
// (bad profile, unsupported dimension); other exceptions are internal.
CommandOutput run_command(const ExperimentConfig& cfg);

// Entry point of the zoll-lab executable.
int cli_main(int argc, char** argv);

}  // namespace zoll::cli

#endif  // ZOLL_CLI_COMMANDS_HPP_
