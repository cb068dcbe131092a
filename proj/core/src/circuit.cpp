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

#include "memilp/circuit.hpp"

#include <algorithm>
#include <cmath>

namespace memilp {

Soac build_circuit(const CanonicalProblem& cp) {
  Soac circuit;
  circuit.n_ = cp.n;
  std::vector<std::size_t> degree(cp.n, 0);

  for (std::size_t i = 0; i < cp.rows.size(); ++i) {
    const CanonicalRow& row = cp.rows[i];
    double positive = 0.0;
    double negative = 0.0;
    double norm = 0.0;
    for (const Term& t : row.terms) {
      (t.coef > 0 ? positive : negative) += t.coef;
      norm += std::abs(t.coef);
    }
    // Least achievable activity over x in [0,1]^n still exceeds b.
    if (negative - row.rhs > 0.0) {
      if (!circuit.trivially_infeasible_) circuit.trivially_infeasible_ = i;
      continue;
    }
    const double max_violation = positive - row.rhs;
    if (max_violation <= 0.0) {
      circuit.dropped_.push_back(i);
      continue;
    }
    Soag gate;
    gate.row = i;
    gate.terminals = row.terms;
    std::sort(gate.terminals.begin(), gate.terminals.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    gate.rhs = row.rhs;
    gate.norm = norm;
    gate.max_violation = max_violation;
    for (const Term& t : gate.terminals) {
      ++degree[t.var];
      circuit.term_var_.push_back(static_cast<std::uint32_t>(t.var));
      circuit.term_coef_.push_back(t.coef);
    }
    circuit.gate_offsets_.push_back(circuit.term_var_.size());
    circuit.gates_.push_back(std::move(gate));
  }

  circuit.adj_offsets_.assign(cp.n + 1, 0);
  for (std::size_t j = 0; j < cp.n; ++j) {
    circuit.adj_offsets_[j + 1] = circuit.adj_offsets_[j] + degree[j];
  }
  circuit.adjacency_.resize(circuit.adj_offsets_[cp.n]);
  std::vector<std::size_t> fill(circuit.adj_offsets_.begin(), circuit.adj_offsets_.end() - 1);
  for (std::size_t g = 0; g < circuit.gates_.size(); ++g) {
    const auto& terminals = circuit.gates_[g].terminals;
    for (std::size_t p = 0; p < terminals.size(); ++p) {
      circuit.adjacency_[fill[terminals[p].var]++] = {static_cast<std::uint32_t>(g),
                                                      static_cast<std::uint32_t>(p)};
    }
  }
  return circuit;
}

double raw_violation(const Soag& gate, std::span<const double> v) {
  double r = -gate.rhs;
  for (const Term& t : gate.terminals) r += t.coef * 0.5 * (v[t.var] + 1.0);
  return r;
}

double violation(const Soag& gate, std::span<const double> v) {
  return std::clamp(raw_violation(gate, v) / gate.max_violation, 0.0, 1.0);
}

std::vector<std::pair<std::size_t, double>> correction_currents(const Soag& gate,
                                                                std::span<const double> v) {
  const double c = violation(gate, v);
  std::vector<std::pair<std::size_t, double>> currents;
  currents.reserve(gate.terminals.size());
  for (const Term& t : gate.terminals) {
    currents.emplace_back(t.var, c == 0.0 ? 0.0 : -(t.coef / gate.norm) * c);
  }
  return currents;
}

std::vector<double> aggregate_currents_scatter(const Soac& circuit, std::span<const double> v) {
  std::vector<double> total(circuit.n(), 0.0);
  for (const Soag& gate : circuit.gates()) {
    for (const auto& [j, current] : correction_currents(gate, v)) total[j] += current;
  }
  return total;
}

std::vector<double> aggregate_currents_gather(const Soac& circuit, std::span<const double> v) {
  const auto& gates = circuit.gates();
  std::vector<double> c(gates.size());
  for (std::size_t g = 0; g < gates.size(); ++g) c[g] = violation(gates[g], v);

  std::vector<double> total(circuit.n(), 0.0);
  for (std::size_t j = 0; j < circuit.n(); ++j) {
    for (const GateRef& ref : circuit.adjacency(j)) {
      const Soag& gate = gates[ref.gate];
      const double coef = gate.terminals[ref.position].coef;
      const double cg = c[ref.gate];
      total[j] += cg == 0.0 ? 0.0 : -(coef / gate.norm) * cg;
    }
  }
  return total;
}

}  // namespace memilp
