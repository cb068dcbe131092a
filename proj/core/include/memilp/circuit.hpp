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

#ifndef MEMILP_CIRCUIT_HPP_
#define MEMILP_CIRCUIT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "memilp/model.hpp"

namespace memilp {

/// A self-organizing algebraic gate: one inequality `sum a_j x_j <= b`
/// over terminals whose voltages v_j in [-1, 1] encode x_j = (v_j + 1) / 2.
struct Soag {
  std::size_t row = 0;           // index into CanonicalProblem::rows
  std::vector<Term> terminals;   // sorted by var, no duplicates
  double rhs = 0.0;
  double norm = 0.0;             // L = sum |a_j|
  double max_violation = 0.0;    // M = sum_{a_j > 0} a_j - b
};

struct GateRef {
  std::uint32_t gate = 0;
  std::uint32_t position = 0;    // index into that gate's terminal list

  friend bool operator==(const GateRef&, const GateRef&) = default;
};

/// The circuit obtained by wiring together gates that share variables.
class Soac {
 public:
  std::size_t n() const { return n_; }
  const std::vector<Soag>& gates() const { return gates_; }
  const std::vector<std::size_t>& dropped() const { return dropped_; }
  const std::optional<std::size_t>& trivially_infeasible() const { return trivially_infeasible_; }

  /// Gates touching variable j, in increasing gate order.
  std::span<const GateRef> adjacency(std::size_t j) const {
    return {adjacency_.data() + adj_offsets_[j], adjacency_.data() + adj_offsets_[j + 1]};
  }

  std::size_t nnz() const { return term_var_.size(); }

  // Flattened gate data (CSR by gate) for the integrator's inner loop.
  std::span<const std::size_t> gate_offsets() const { return gate_offsets_; }
  std::span<const std::uint32_t> term_vars() const { return term_var_; }
  std::span<const double> term_coefs() const { return term_coef_; }

  friend Soac build_circuit(const CanonicalProblem& cp);

 private:
  std::size_t n_ = 0;
  std::vector<Soag> gates_;
  std::vector<std::size_t> adj_offsets_{0};
  std::vector<GateRef> adjacency_;
  std::vector<std::size_t> dropped_;
  std::optional<std::size_t> trivially_infeasible_;
  std::vector<std::size_t> gate_offsets_{0};
  std::vector<std::uint32_t> term_var_;
  std::vector<double> term_coef_;
};

Soac build_circuit(const CanonicalProblem& cp);

/// r = sum a_j (v_j + 1)/2 - b.
double raw_violation(const Soag& gate, std::span<const double> v);

/// C = clamp(r / M, 0, 1).
double violation(const Soag& gate, std::span<const double> v);

/// I_j = -(a_j / L) * C for each terminal.
std::vector<std::pair<std::size_t, double>> correction_currents(const Soag& gate,
                                                                std::span<const double> v);

// Total correction current into every variable. The scatter version walks
// gates and the gather version walks the adjacency; both sum in gate order.
std::vector<double> aggregate_currents_scatter(const Soac& circuit, std::span<const double> v);
std::vector<double> aggregate_currents_gather(const Soac& circuit, std::span<const double> v);

}  // namespace memilp

#endif  // MEMILP_CIRCUIT_HPP_
