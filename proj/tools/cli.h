// Copyright 2026 The Stagescore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STAGESCORE_TOOLS_CLI_H_
#define STAGESCORE_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace stagescore {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

inline constexpr char kConfigEnv[] = "STAGESCORE_CONFIG";

// Runs the command line `args` (args[0] is the program name). Results go to
// `out` unless --out names a file; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace stagescore

#endif  // STAGESCORE_TOOLS_CLI_H_
