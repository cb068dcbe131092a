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

#include "memilp/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <thread>

#include "json.hpp"
#include "memilp/circuit.hpp"

namespace memilp {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct RoundResult {
  std::optional<TrajectoryOutcome> winner;
  std::uint64_t winner_seed = 0;
  std::uint64_t steps = 0;         // charged steps, deterministic under step budgets
  std::uint64_t trajectories = 0;  // trajectories up to and including the winner
};

struct RoundPlan {
  std::uint64_t first_seed = 0;
  std::vector<std::uint64_t> step_budgets;  // one per trajectory slot
  double wall_time = 0.0;                   // per trajectory, <= 0 unlimited
  const std::vector<double>* warm_voltages = nullptr;
};

// Runs trajectories with consecutive seeds and returns the solved one with
// the smallest seed. Slots after a known winner are cancelled; slots before
// it always run to completion, so the answer does not depend on scheduling.
RoundResult run_round(const Soac& circuit, const CanonicalProblem& cp, const SolverConfig& config,
                      const RoundPlan& plan) {
  const std::size_t slots = plan.step_budgets.size();
  RoundResult result;
  if (slots == 0) return result;

  std::vector<std::optional<TrajectoryOutcome>> outcomes(slots);
  auto cancel = std::make_unique<std::atomic<bool>[]>(slots);
  for (std::size_t k = 0; k < slots; ++k) cancel[k].store(false);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{slots};

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= slots || k > best.load()) return;
      IntegrateOptions options;
      options.cancel = &cancel[k];
      options.trace = config.trace;
      options.initial_voltages = plan.warm_voltages;
      Budget budget{plan.step_budgets[k], plan.wall_time};
      TrajectoryOutcome outcome =
          integrate(circuit, cp, config.params, plan.first_seed + k, budget, options);
      const bool solved = outcome.status == TrajectoryStatus::kSolved;
      outcomes[k] = std::move(outcome);
      if (solved) {
        std::size_t current = best.load();
        while (k < current && !best.compare_exchange_weak(current, k)) {
        }
        for (std::size_t later = k + 1; later < slots; ++later) cancel[later].store(true);
      }
    }
  };

  std::size_t threads = config.trace ? 1 : config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, slots);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  const std::size_t winner = best.load();
  const std::size_t last = winner < slots ? winner : slots - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    if (!outcomes[k]) continue;
    result.steps += outcomes[k]->steps;
    ++result.trajectories;
  }
  if (winner < slots) {
    result.winner = std::move(outcomes[winner]);
    result.winner_seed = plan.first_seed + winner;
  }
  return result;
}

// Step allotments for one round: slot k receives what is left after the
// earlier slots were granted their full per-run budget.
std::vector<std::uint64_t> allot_steps(const SolverConfig& config, std::uint64_t used) {
  std::vector<std::uint64_t> budgets;
  for (std::size_t k = 0; k < config.restarts; ++k) {
    std::uint64_t allot = config.max_steps_per_run;
    if (config.max_total_steps > 0) {
      const std::uint64_t granted = used + k * config.max_steps_per_run;
      if (granted >= config.max_total_steps) break;
      allot = std::min(allot, config.max_total_steps - granted);
    }
    budgets.push_back(allot);
  }
  return budgets;
}

Incumbent make_incumbent(const CanonicalProblem& cp, const TrajectoryOutcome& outcome,
                         std::uint64_t seed, double bound, double found_at) {
  Incumbent inc;
  inc.canonical = *outcome.assignment;
  inc.assignment = decode(cp.var_map, inc.canonical);
  inc.canonical_objective = objective_value(cp, inc.canonical);
  inc.objective = to_original_objective(cp, inc.canonical_objective);
  inc.found_at = found_at;
  inc.bound = bound;
  inc.seed = seed;
  inc.steps = outcome.steps;
  return inc;
}

bool objective_integral(const CanonicalProblem& cp) {
  auto integral = [](double x) { return std::trunc(x) == x && std::abs(x) < 4.5e15; };
  if (!integral(cp.offset)) return false;
  return std::all_of(cp.objective.begin(), cp.objective.end(),
                     [&](const Term& t) { return integral(t.coef); });
}

class Sweep {
 public:
  explicit Sweep(const SolverConfig& config)
      : config_(config), started_(Clock::now()) {}

  bool budget_left() const {
    if (config_.max_total_steps > 0 && usage_.steps >= config_.max_total_steps) return false;
    if (config_.wall_time_total > 0 && seconds_since(started_) >= config_.wall_time_total) {
      return false;
    }
    return true;
  }

  bool has_total_budget() const {
    return config_.max_total_steps > 0 || config_.wall_time_total > 0;
  }

  // Wall time granted to each trajectory of the next round.
  double round_wall_time(double remaining_iterations) const {
    if (config_.wall_time_total <= 0) return 0.0;
    const double remaining = config_.wall_time_total - seconds_since(started_);
    return std::max(remaining / std::max(1.0, remaining_iterations), 1e-3);
  }

  RoundResult round(const Soac& circuit, const CanonicalProblem& current, double iterations,
                    const std::vector<double>* warm) {
    RoundPlan plan;
    plan.first_seed = next_seed_;
    plan.step_budgets = allot_steps(config_, usage_.steps);
    plan.wall_time = round_wall_time(iterations);
    plan.warm_voltages = warm;
    next_seed_ += config_.restarts;
    RoundResult result = run_round(circuit, current, config_, plan);
    usage_.steps += result.steps;
    usage_.trajectories += result.trajectories;
    ++usage_.rounds;
    return result;
  }

  double elapsed() const { return seconds_since(started_); }
  BudgetUsage usage() const {
    BudgetUsage u = usage_;
    u.wall_seconds = elapsed();
    return u;
  }

 private:
  const SolverConfig& config_;
  Clock::time_point started_;
  std::uint64_t next_seed_ = config_.seed;
  BudgetUsage usage_;
};

}  // namespace

std::optional<std::string> check_config(const SolverConfig& config) {
  if (auto err = check_params(config.params)) return err;
  if (config.restarts < 1) return "restarts must be at least 1";
  if (config.max_steps_per_run < 1) return "max_steps_per_run must be positive";
  if (config.wall_time_total < 0) return "wall time must be non-negative";
  if (config.sweep.granularity && !(*config.sweep.granularity > 0)) {
    return "granularity must be positive";
  }
  return std::nullopt;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kOptimumNotProven: return "optimum-not-proven";
    case Verdict::kInfeasibleNotProven: return "infeasible-not-proven";
    case Verdict::kTriviallyInfeasible: return "trivially-infeasible";
  }
  return "infeasible-not-proven";
}

std::pair<double, double> trivial_bounds(const CanonicalProblem& cp) {
  CompensatedSum lower;
  CompensatedSum upper;
  for (const Term& t : cp.objective) (t.coef < 0 ? lower : upper).add(t.coef);
  lower.add(cp.offset);
  upper.add(cp.offset);
  return {lower.value(), upper.value()};
}

FeasibilityOutcome solve_feasibility(const CanonicalProblem& cp, const SolverConfig& config) {
  FeasibilityOutcome out;
  const Soac circuit = build_circuit(cp);
  if (circuit.trivially_infeasible()) {
    out.verdict = Verdict::kTriviallyInfeasible;
    return out;
  }
  Sweep sweep(config);
  do {
    RoundResult round = sweep.round(circuit, cp, 1.0, nullptr);
    if (round.winner) {
      out.incumbent = make_incumbent(cp, *round.winner, round.winner_seed, kInf, sweep.elapsed());
      out.verdict = Verdict::kOptimumNotProven;
      break;
    }
  } while (sweep.has_total_budget() && sweep.budget_left());
  out.budget = sweep.usage();
  return out;
}

SolveReport solve_optimize(const CanonicalProblem& cp, const SolverConfig& config) {
  SolveReport report;
  report.params = config.params;

  if (!cp.has_objective()) {
    FeasibilityOutcome feasible = solve_feasibility(cp, config);
    report.verdict = feasible.verdict;
    report.budget = feasible.budget;
    if (feasible.incumbent) {
      report.history.push_back(*feasible.incumbent);
      report.best = std::move(feasible.incumbent);
      report.floor_reached = true;
    }
    return report;
  }

  const auto [lower, upper] = trivial_bounds(cp);
  if (config.sweep.granularity) {
    report.granularity = *config.sweep.granularity;
  } else if (objective_integral(cp)) {
    report.granularity = 1.0;
  } else {
    report.granularity = upper > lower ? 1e-6 * (upper - lower) : 1.0;
  }
  const double g = report.granularity;

  Sweep sweep(config);
  double bound = kInf;
  CanonicalProblem current = cp;
  std::vector<double> warm;

  while (sweep.budget_left()) {
    const Soac circuit = build_circuit(current);
    if (circuit.trivially_infeasible()) {
      if (!report.best) report.verdict = Verdict::kTriviallyInfeasible;
      break;
    }
    const double reference = report.best ? report.best->canonical_objective : upper;
    const double iterations = std::min(1000.0, std::ceil((reference - lower) / g) + 1.0);
    const bool use_warm = config.sweep.warm_start && !warm.empty();
    RoundResult round = sweep.round(circuit, current, iterations, use_warm ? &warm : nullptr);
    if (!round.winner) {
      if (!sweep.has_total_budget()) break;
      continue;
    }
    Incumbent inc = make_incumbent(cp, *round.winner, round.winner_seed, bound, sweep.elapsed());
    if (config.sweep.warm_start) warm = round.winner->final_voltages;
    bound = inc.canonical_objective - g;
    report.history.push_back(inc);
    report.best = std::move(inc);
    if (bound < lower) {
      report.floor_reached = true;
      break;
    }
    current = add_objective_bound(cp, bound);
  }

  if (report.best) {
    report.verdict = Verdict::kOptimumNotProven;
  } else if (report.verdict != Verdict::kTriviallyInfeasible) {
    report.verdict = Verdict::kInfeasibleNotProven;
  }
  report.budget = sweep.usage();
  return report;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

ordered_json incumbent_json(const Incumbent& inc, bool include_timing) {
  ordered_json j;
  j["objective"] = inc.objective;
  ordered_json values = ordered_json::object();
  for (const auto& [name, value] : inc.assignment) values[name] = value;
  j["assignment"] = std::move(values);
  if (include_timing) j["found_at"] = inc.found_at;
  j["bound"] = number_or_null(inc.bound);
  j["seed"] = inc.seed;
  j["steps"] = inc.steps;
  return j;
}

}  // namespace

std::string report_to_json(const SolveReport& report, bool include_timing) {
  ordered_json doc;
  doc["best"] = report.best ? incumbent_json(*report.best, include_timing) : ordered_json(nullptr);
  ordered_json history = ordered_json::array();
  for (const Incumbent& inc : report.history) history.push_back(incumbent_json(inc, include_timing));
  doc["history"] = std::move(history);
  doc["verdict"] = to_string(report.verdict);
  ordered_json budget;
  budget["steps"] = report.budget.steps;
  budget["trajectories"] = report.budget.trajectories;
  budget["rounds"] = report.budget.rounds;
  if (include_timing) budget["wall_seconds"] = report.budget.wall_seconds;
  doc["budget"] = std::move(budget);
  ordered_json params;
  for (const auto& [name, value] : param_list(report.params)) params[name] = value;
  doc["params"] = std::move(params);
  doc["granularity"] = report.granularity;
  doc["floor_reached"] = report.floor_reached;
  return doc.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

}  // namespace memilp
