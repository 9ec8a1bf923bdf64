// Copyright 2026 The casimir-twin Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace casimir::cli {

/// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;        // parse, data or domain error
inline constexpr int kExitConvergence = 3;  // numerical non-convergence
inline constexpr int kExitFit = 4;          // fit or calibration failure

/// Runs one subcommand. `args` excludes the program name. Results go to files
/// under --out when given, otherwise to `out`; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` through a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace casimir::cli
