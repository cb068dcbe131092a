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

#include "memilp/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>

namespace memilp {

std::optional<std::string> check_params(const DynParams& p) {
  if (!(p.alpha > 0 && p.beta > 0 && p.epsilon > 0 && p.zeta > 0)) {
    return "alpha, beta, epsilon and zeta must be positive";
  }
  if (!(0.0 <= p.delta && p.delta < p.gamma && p.gamma < 1.0)) {
    return "thresholds must satisfy 0 <= delta < gamma < 1";
  }
  if (!(p.dt > 0)) return "dt must be positive";
  if (!(p.dv_max > 0 && p.dv_max <= 2.0)) return "dv_max must lie in (0, 2]";
  if (!(p.xl_max >= 1.0)) return "xl_max must be at least 1";
  if (p.check_every < 1) return "check_every must be at least 1";
  return std::nullopt;
}

bool set_param(DynParams& p, std::string_view name, std::string_view value) {
  if (name == "check_every") {
    std::uint64_t n = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (ec != std::errc() || ptr != value.data() + value.size()) return false;
    p.check_every = n;
    return true;
  }
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(x)) return false;
  double* field = nullptr;
  if (name == "alpha") field = &p.alpha;
  if (name == "beta") field = &p.beta;
  if (name == "gamma") field = &p.gamma;
  if (name == "delta") field = &p.delta;
  if (name == "epsilon") field = &p.epsilon;
  if (name == "zeta") field = &p.zeta;
  if (name == "xl_max") field = &p.xl_max;
  if (name == "dt") field = &p.dt;
  if (name == "dv_max") field = &p.dv_max;
  if (!field) return false;
  *field = x;
  return true;
}

std::vector<std::pair<std::string, double>> param_list(const DynParams& p) {
  return {{"alpha", p.alpha},   {"beta", p.beta},     {"gamma", p.gamma},
          {"delta", p.delta},   {"epsilon", p.epsilon}, {"zeta", p.zeta},
          {"xl_max", p.xl_max}, {"dt", p.dt},         {"dv_max", p.dv_max},
          {"check_every", static_cast<double>(p.check_every)}};
}

std::string to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::kSolved: return "solved";
    case TrajectoryStatus::kBudgetExhausted: return "budget-exhausted";
    case TrajectoryStatus::kTriviallyInfeasible: return "trivially-infeasible";
  }
  return "budget-exhausted";
}

DynState init_state(const Soac& circuit, std::uint64_t seed, const DynParams&) {
  DynState state;
  state.rng.seed(seed);
  state.v.resize(circuit.n());
  for (double& v : state.v) {
    v = 2.0 * (static_cast<double>(state.rng() >> 11) * 0x1.0p-53) - 1.0;
  }
  state.xs.assign(circuit.gates().size(), 0.5);
  state.xl.assign(circuit.gates().size(), 1.0);
  return state;
}

namespace {

// Evaluates the right-hand side into preallocated buffers. Contributions to
// dv are accumulated gate by gate in index order, so the result does not
// depend on how callers schedule work.
class Evaluator {
 public:
  explicit Evaluator(const Soac& circuit)
      : circuit_(circuit),
        level_(circuit.n()),
        bit_(circuit.n()),
        half_rail_(circuit.n()),
        c_(circuit.gates().size()),
        dv_(circuit.n()),
        dxs_(circuit.gates().size()),
        dxl_(circuit.gates().size()) {
    const auto& gates = circuit.gates();
    inv_norm_.reserve(gates.size());
    inv_max_.reserve(gates.size());
    rhs_.reserve(gates.size());
    for (const Soag& g : gates) {
      inv_norm_.push_back(1.0 / g.norm);
      inv_max_.push_back(1.0 / g.max_violation);
      rhs_.push_back(g.rhs);
      double smallest = g.max_violation;
      for (const Term& t : g.terminals) smallest = std::min(smallest, std::abs(t.coef));
      inv_digital_.push_back(1.0 / smallest);
      // Integral rows sum exactly in double; others get a little slack so the
      // screen in digitally_clear() never hides a feasible rounding.
      bool exact = std::floor(g.rhs) == g.rhs;
      for (const Term& t : g.terminals) exact = exact && std::floor(t.coef) == t.coef;
      screen_.push_back(exact ? 0.0 : 1e-9 * (g.norm + std::abs(g.rhs)));
    }
  }

  void evaluate(const DynState& s, const DynParams& p) {
    const auto offsets = circuit_.gate_offsets();
    const auto vars = circuit_.term_vars();
    const auto coefs = circuit_.term_coefs();
    const std::size_t gates = c_.size();

    // Per-variable quantities first; the gate loop below then only does
    // straight-line arithmetic, which keeps it free of data-dependent branches.
    for (std::size_t j = 0; j < dv_.size(); ++j) {
      const double v = s.v[j];
      const double bit = v >= 0.0 ? 1.0 : 0.0;
      level_[j] = 0.5 * (v + 1.0);
      bit_[j] = bit;
      half_rail_[j] = 0.5 * (2.0 * bit - 1.0 - v);
      dv_[j] = 0.0;
    }

    digital_violations_ = 0;
    for (std::size_t g = 0; g < gates; ++g) {
      const std::size_t begin = offsets[g];
      const std::size_t end = offsets[g + 1];
      double r = -rhs_[g];
      double rd = -rhs_[g];
      for (std::size_t k = begin; k < end; ++k) {
        const std::uint32_t j = vars[k];
        r += coefs[k] * level_[j];
        rd += coefs[k] * bit_[j];
      }
      const double c = std::max(std::clamp(r * inv_max_[g], 0.0, 1.0),
                                 std::clamp(rd * inv_digital_[g], 0.0, 1.0));
      c_[g] = c;
      digital_violations_ += rd > screen_[g] ? 1 : 0;

      const double xs = s.xs[g];
      const double xl = s.xl[g];
      const double gradient = xl * xs * c * inv_norm_[g];
      const double rigidity = (1.0 + p.zeta * xl) * (1.0 - xs) * inv_norm_[g];
      for (std::size_t k = begin; k < end; ++k) {
        const std::uint32_t j = vars[k];
        const double a = coefs[k];
        dv_[j] += -gradient * a + rigidity * std::abs(a) * half_rail_[j];
      }
      dxs_[g] = p.beta * (xs + p.epsilon) * (c - p.gamma);
      dxl_[g] = p.alpha * (c - p.delta);
    }
  }

  void advance(DynState& s, const DynParams& p) const {
    for (std::size_t j = 0; j < dv_.size(); ++j) {
      const double dv = std::clamp(p.dt * dv_[j], -p.dv_max, p.dv_max);
      s.v[j] = std::clamp(s.v[j] + dv, -1.0, 1.0);
    }
    for (std::size_t g = 0; g < c_.size(); ++g) {
      s.xs[g] = std::clamp(s.xs[g] + p.dt * dxs_[g], 0.0, 1.0);
      s.xl[g] = std::clamp(s.xl[g] + p.dt * dxl_[g], 1.0, p.xl_max);
    }
    s.t += p.dt;
  }

  const std::vector<double>& dv() const { return dv_; }
  const std::vector<double>& dxs() const { return dxs_; }
  const std::vector<double>& dxl() const { return dxl_; }
  const std::vector<double>& violations() const { return c_; }
  // False when some gate is certainly violated by the rounded voltages.
  bool digitally_clear() const { return digital_violations_ == 0; }

 private:
  const Soac& circuit_;
  std::vector<double> inv_norm_;
  std::vector<double> inv_max_;
  std::vector<double> rhs_;
  std::vector<double> inv_digital_;
  std::vector<double> screen_;
  std::vector<double> level_;
  std::vector<double> bit_;
  std::vector<double> half_rail_;
  std::vector<double> c_;
  std::vector<double> dv_;
  std::vector<double> dxs_;
  std::vector<double> dxl_;
  std::size_t digital_violations_ = 0;
};

std::pair<double, std::size_t> violation_summary(const Soac& circuit, std::span<const double> v) {
  double worst = 0.0;
  std::size_t count = 0;
  for (const Soag& gate : circuit.gates()) {
    const double c = violation(gate, v);
    worst = std::max(worst, c);
    if (c > 0.0) ++count;
  }
  return {worst, count};
}

}  // namespace

Derivatives rhs(const Soac& circuit, const DynState& state, const DynParams& params) {
  Evaluator eval(circuit);
  eval.evaluate(state, params);
  return {eval.dv(), eval.dxs(), eval.dxl()};
}

DynState step(const Soac& circuit, const DynState& state, const DynParams& params) {
  Evaluator eval(circuit);
  eval.evaluate(state, params);
  DynState next = state;
  eval.advance(next, params);
  return next;
}

Assignment round_voltages(std::span<const double> v) {
  Assignment a(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) a[j] = v[j] >= 0.0 ? 1 : 0;
  return a;
}

std::optional<Assignment> detect_solution(const Soac&, const CanonicalProblem& cp,
                                          const DynState& state) {
  Assignment a = round_voltages(state.v);
  if (is_feasible(cp, a)) return a;
  return std::nullopt;
}

TrajectoryOutcome integrate(const Soac& circuit, const CanonicalProblem& cp,
                            const DynParams& params, std::uint64_t seed, const Budget& budget,
                            const IntegrateOptions& options) {
  TrajectoryOutcome outcome;
  if (circuit.trivially_infeasible()) {
    outcome.status = TrajectoryStatus::kTriviallyInfeasible;
    return outcome;
  }

  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  const bool timed = budget.wall_time > 0.0;

  DynState state = init_state(circuit, seed, params);
  if (options.initial_voltages && options.initial_voltages->size() == state.v.size()) {
    state.v = *options.initial_voltages;
    for (double& v : state.v) v = std::clamp(v, -1.0, 1.0);
  }

  const FeasibilityChecker checker(cp);
  Evaluator eval(circuit);
  Assignment rounded(circuit.n());
  const std::uint64_t check_every = std::max<std::uint64_t>(1, params.check_every);

  auto record = [&](double worst) {
    TrajectoryStats& st = outcome.stats;
    if (st.samples == 0) {
      st.initial_max_violation = worst;
      st.min_max_violation = worst;
    }
    st.final_max_violation = worst;
    st.min_max_violation = std::min(st.min_max_violation, worst);
    ++st.samples;
  };

  std::uint64_t steps = 0;
  for (;;) {
    eval.evaluate(state, params);
    if (steps % check_every == 0) {
      if (options.trace && *options.trace) {
        const auto [worst, count] = violation_summary(circuit, state.v);
        (*options.trace)({steps, state.t, worst, count, state.v});
      }
      if (eval.digitally_clear()) {
        for (std::size_t j = 0; j < rounded.size(); ++j) rounded[j] = state.v[j] >= 0.0 ? 1 : 0;
        if (checker.feasible(rounded)) {
          outcome.status = TrajectoryStatus::kSolved;
          outcome.assignment = rounded;
          break;
        }
      }
    }
    if (steps >= budget.max_steps) break;
    if (options.cancel && options.cancel->load(std::memory_order_relaxed)) break;
    if (timed && (steps & 255) == 0 &&
        std::chrono::duration<double>(Clock::now() - started).count() >= budget.wall_time) {
      break;
    }
    const auto& c = eval.violations();
    record(c.empty() ? 0.0 : *std::max_element(c.begin(), c.end()));
    eval.advance(state, params);
    ++steps;
  }

  outcome.steps = steps;
  outcome.t_final = state.t;
  outcome.final_voltages = std::move(state.v);
  return outcome;
}

}  // namespace memilp
