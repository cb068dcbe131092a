// Copyright 2026 The memilp Authors
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

#ifndef MEMILP_TOOLS_CLI_HPP_
#define MEMILP_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace memilp::cli {

// Process exit codes; stable across releases.
enum ExitCode : int {
  kOk = 0,
  kNoSolution = 1,
  kInfeasible = 2,
  kInputError = 3,
  kInternalError = 4,
};

inline constexpr const char* kBenchHeader = "instance,n,m,nnz,status,best,oracle_opt,wall_s,steps";

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memilp::cli

#endif  // MEMILP_TOOLS_CLI_HPP_
