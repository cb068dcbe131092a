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

#ifndef MEMILP_SOLVER_HPP_
#define MEMILP_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "memilp/dynamics.hpp"
#include "memilp/model.hpp"

namespace memilp {

struct SweepConfig {
  // Amount by which the objective bound is tightened after each incumbent.
  // Defaults to 1 for integral objectives and 1e-6 of the objective range
  // otherwise.
  std::optional<double> granularity;
  // Start each bound from the previous winner's final voltages.
  bool warm_start = false;
};

struct SolverConfig {
  DynParams params;
  std::size_t restarts = 8;               // trajectories per round
  std::uint64_t seed = 1;                 // seed of the first trajectory
  std::uint64_t max_steps_per_run = 100000;
  std::uint64_t max_total_steps = 0;      // 0 = unlimited
  double wall_time_total = 0.0;           // seconds, 0 = unlimited
  SweepConfig sweep;
  std::size_t threads = 0;                // 0 = hardware concurrency
  const TraceSink* trace = nullptr;       // forces serial trajectories
};

/// Empty when the configuration is usable, otherwise the reason it is not.
std::optional<std::string> check_config(const SolverConfig& config);

struct Incumbent {
  OriginalAssignment assignment;
  Assignment canonical;
  double objective = 0.0;            // in the original problem's sense
  double canonical_objective = 0.0;  // minimized value
  double found_at = 0.0;             // wall seconds since the solve started
  double bound = 0.0;                // objective bound active when found (+inf for none)
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;           // steps of the winning trajectory
};

enum class Verdict { kOptimumNotProven, kInfeasibleNotProven, kTriviallyInfeasible };

std::string to_string(Verdict verdict);

struct BudgetUsage {
  std::uint64_t steps = 0;
  std::uint64_t trajectories = 0;
  std::uint64_t rounds = 0;
  double wall_seconds = 0.0;

  friend bool operator==(const BudgetUsage&, const BudgetUsage&) = default;
};

struct FeasibilityOutcome {
  std::optional<Incumbent> incumbent;
  Verdict verdict = Verdict::kInfeasibleNotProven;
  BudgetUsage budget;
};

FeasibilityOutcome solve_feasibility(const CanonicalProblem& cp, const SolverConfig& config);

struct SolveReport {
  std::optional<Incumbent> best;
  std::vector<Incumbent> history;
  Verdict verdict = Verdict::kInfeasibleNotProven;
  BudgetUsage budget;
  DynParams params;
  double granularity = 1.0;
  bool floor_reached = false;  // best equals the trivial lower bound
};

SolveReport solve_optimize(const CanonicalProblem& cp, const SolverConfig& config);

/// (sum of negative objective coefficients, sum of positive ones), each
/// plus the offset.
std::pair<double, double> trivial_bounds(const CanonicalProblem& cp);

/// Serializes {best, history, verdict, budget, params, granularity}.
/// Without timing, wall-clock fields are omitted so reports of equal runs
/// compare byte for byte.
std::string report_to_json(const SolveReport& report, bool include_timing = true);

}  // namespace memilp

#endif  // MEMILP_SOLVER_HPP_
