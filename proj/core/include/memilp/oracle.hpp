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

#ifndef MEMILP_ORACLE_HPP_
#define MEMILP_ORACLE_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "memilp/model.hpp"

namespace memilp {

// Exact reference solvers for small instances. Both return the minimum
// canonical objective and the lexicographically smallest minimizer, so
// their answers can be compared field by field.

inline constexpr std::size_t kEnumerateMaxVars = 24;
inline constexpr std::size_t kBranchAndBoundMaxVars = 34;

class TooLarge : public std::runtime_error {
 public:
  TooLarge(std::size_t n, std::size_t limit)
      : std::runtime_error("oracle limited to " + std::to_string(limit) + " binaries, got " +
                           std::to_string(n)) {}
};

struct OracleResult {
  bool feasible = false;
  double optimum = 0.0;  // canonical (minimization) value; meaningless when infeasible
  Assignment witness;
  std::size_t nodes = 0;  // assignments scanned or search nodes visited
};

OracleResult enumerate_optimum(const CanonicalProblem& cp);
OracleResult branch_and_bound(const CanonicalProblem& cp);

}  // namespace memilp

#endif  // MEMILP_ORACLE_HPP_
