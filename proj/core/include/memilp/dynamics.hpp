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

#ifndef MEMILP_DYNAMICS_HPP_
#define MEMILP_DYNAMICS_HPP_

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memilp/circuit.hpp"
#include "memilp/model.hpp"

namespace memilp {

/// Rates and thresholds of the equations of motion.
///
/// Voltages follow the memory-weighted correction currents of every gate
/// they belong to, plus an attraction toward the nearest rail that is
/// strongest while a gate's short-term memory is low:
///
///   dv_j  = sum_i [ -xl_i xs_i (a_ij / L_i) S_i + (1 + zeta xl_i)(1 - xs_i) R_ij ]
///   R_ij  = (|a_ij| / L_i) (sign(v_j) - v_j) / 2
///   dxs_i = beta (xs_i + epsilon)(S_i - gamma)
///   dxl_i = alpha (S_i - delta)
///
/// The drive S_i = max(C_i, D_i) combines the gate violation C_i with the
/// violation of the rounded voltages, D_i = clamp(r_i(round v) / rho_i, 0, 1)
/// with rho_i = min(M_i, min_j |a_ij|). At digital voltages S_i is zero
/// exactly when the row holds, so satisfying assignments are fixed points.
/// D_i keeps a gate active while fractional voltages satisfy the relaxed
/// inequality but their rounding does not.
struct DynParams {
  double alpha = 5.0;      // long-term memory rate
  double beta = 20.0;      // short-term memory rate
  double gamma = 0.25;     // short-term threshold
  double delta = 0.05;     // long-term threshold
  double epsilon = 1e-3;   // short-term floor
  double zeta = 0.1;       // rigidity boost from long-term memory
  double xl_max = 1e4;
  double dt = 0.1;
  double dv_max = 0.5;     // per-step voltage change clamp
  std::uint64_t check_every = 1;

  friend bool operator==(const DynParams&, const DynParams&) = default;
};

/// Empty when every invariant holds, otherwise a description of the first
/// violated one.
std::optional<std::string> check_params(const DynParams& params);

/// Sets a parameter by its field name. Returns false for unknown names or
/// unparsable values.
bool set_param(DynParams& params, std::string_view name, std::string_view value);

/// (name, value) pairs in declaration order, for reports.
std::vector<std::pair<std::string, double>> param_list(const DynParams& params);

struct DynState {
  double t = 0.0;
  std::vector<double> v;    // per variable, in [-1, 1]
  std::vector<double> xs;   // per gate, in [0, 1]
  std::vector<double> xl;   // per gate, in [1, xl_max]
  std::mt19937_64 rng;
};

DynState init_state(const Soac& circuit, std::uint64_t seed, const DynParams& params);

struct Derivatives {
  std::vector<double> dv;
  std::vector<double> dxs;
  std::vector<double> dxl;
};

Derivatives rhs(const Soac& circuit, const DynState& state, const DynParams& params);

/// One clamped forward-Euler step.
DynState step(const Soac& circuit, const DynState& state, const DynParams& params);

Assignment round_voltages(std::span<const double> v);

std::optional<Assignment> detect_solution(const Soac& circuit, const CanonicalProblem& cp,
                                          const DynState& state);

enum class TrajectoryStatus { kSolved, kBudgetExhausted, kTriviallyInfeasible };

std::string to_string(TrajectoryStatus status);

struct Budget {
  std::uint64_t max_steps = 100000;
  double wall_time = 0.0;  // seconds; <= 0 disables the wall-clock limit
};

struct TraceSample {
  std::uint64_t step = 0;
  double t = 0.0;
  double max_violation = 0.0;
  std::size_t violated_rows = 0;  // gates with C_i > 0
  std::span<const double> v;
};

using TraceSink = std::function<void(const TraceSample&)>;

struct TrajectoryStats {
  double initial_max_violation = 0.0;
  double final_max_violation = 0.0;
  double min_max_violation = 0.0;
  std::size_t samples = 0;
};

struct TrajectoryOutcome {
  TrajectoryStatus status = TrajectoryStatus::kBudgetExhausted;
  std::optional<Assignment> assignment;
  std::uint64_t steps = 0;
  double t_final = 0.0;
  TrajectoryStats stats;
  std::vector<double> final_voltages;
};

struct IntegrateOptions {
  const TraceSink* trace = nullptr;
  // Polled between steps; when it becomes true the run ends as exhausted.
  const std::atomic<bool>* cancel = nullptr;
  // Replaces the random initial voltages (memories still start fresh).
  const std::vector<double>* initial_voltages = nullptr;
};

TrajectoryOutcome integrate(const Soac& circuit, const CanonicalProblem& cp,
                            const DynParams& params, std::uint64_t seed, const Budget& budget,
                            const IntegrateOptions& options = {});

}  // namespace memilp

#endif  // MEMILP_DYNAMICS_HPP_
