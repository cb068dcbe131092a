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

#ifndef MEMILP_MODEL_HPP_
#define MEMILP_MODEL_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace memilp {

// ---------------------------------------------------------------------------
// User-facing problem
// ---------------------------------------------------------------------------

enum class VarKind { kBinary, kInteger };
enum class Relation { kLessEqual, kGreaterEqual, kEqual };
enum class Sense { kMinimize, kMaximize };

/// Largest admissible integer range u - l before binary expansion is refused.
inline constexpr std::int64_t kMaxIntegerRange = std::int64_t{1} << 30;

struct Variable {
  std::string name;
  VarKind kind = VarKind::kBinary;
  // Only meaningful for kInteger; binaries are implicitly [0, 1].
  std::int64_t lower = 0;
  std::int64_t upper = 1;

  std::int64_t lower_bound() const { return kind == VarKind::kBinary ? 0 : lower; }
  std::int64_t upper_bound() const { return kind == VarKind::kBinary ? 1 : upper; }

  friend bool operator==(const Variable&, const Variable&) = default;
};

using Coefficients = std::map<std::string, double>;

struct Row {
  std::string name;
  Coefficients coefficients;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;

  friend bool operator==(const Row&, const Row&) = default;
};

struct Objective {
  Coefficients coefficients;
  double offset = 0.0;

  friend bool operator==(const Objective&, const Objective&) = default;
};

struct IlpProblem {
  std::string name;
  std::vector<Variable> variables;
  std::vector<Row> rows;
  Objective objective;
  Sense sense = Sense::kMinimize;

  friend bool operator==(const IlpProblem&, const IlpProblem&) = default;
};

struct Defect {
  std::string entity;   // e.g. "variable x", "row c3"
  std::string message;
};

std::vector<Defect> validate(const IlpProblem& problem);

// ---------------------------------------------------------------------------
// Canonical form: binaries only, every row `terms <= rhs`, minimization.
// ---------------------------------------------------------------------------

struct Term {
  std::size_t var = 0;
  double coef = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

struct CanonicalRow {
  std::string name;
  std::vector<Term> terms;  // sorted by var, no duplicates, no zeros
  double rhs = 0.0;

  friend bool operator==(const CanonicalRow&, const CanonicalRow&) = default;
};

/// How one original variable is recovered from canonical bits:
/// value = base + sum(weight_k * y_k).
struct VarMapping {
  std::string name;
  bool direct = true;  // plain binary mapped onto a single bit
  std::int64_t base = 0;
  std::int64_t lower = 0;
  std::int64_t upper = 1;
  std::vector<std::pair<std::size_t, std::int64_t>> bits;  // (canonical index, weight)

  friend bool operator==(const VarMapping&, const VarMapping&) = default;
};

using VarMap = std::vector<VarMapping>;

struct CanonicalProblem {
  std::size_t n = 0;
  std::vector<CanonicalRow> rows;
  std::vector<Term> objective;
  double offset = 0.0;
  VarMap var_map;
  Sense original_sense = Sense::kMinimize;
  // True when every coefficient, rhs and the offset are integers small
  // enough for exact 64-bit evaluation.
  bool integral = true;

  bool has_objective() const { return !objective.empty(); }
  std::size_t nnz() const;

  friend bool operator==(const CanonicalProblem&, const CanonicalProblem&) = default;
};

/// Canonical space 0/1 vector.
using Assignment = std::vector<std::uint8_t>;

/// Original-space values keyed by variable name.
using OriginalAssignment = std::map<std::string, std::int64_t>;

class ExpansionTooLarge : public std::runtime_error {
 public:
  explicit ExpansionTooLarge(const std::string& variable)
      : std::runtime_error("integer range of '" + variable + "' exceeds expansion guard"),
        variable_(variable) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

class InvalidProblem : public std::runtime_error {
 public:
  explicit InvalidProblem(std::vector<Defect> defects);
  const std::vector<Defect>& defects() const { return defects_; }

 private:
  std::vector<Defect> defects_;
};

/// Binary expansion weights 1, 2, 4, ..., 2^(m-1), r for a range u - l.
std::vector<std::int64_t> expansion_weights(std::int64_t range);

/// Throws InvalidProblem when validate() reports defects and
/// ExpansionTooLarge for oversized integer ranges.
CanonicalProblem canonicalize(const IlpProblem& problem);

/// Returns sum(a_ij x_j) - b_i. Exact for integral data.
double evaluate_row(const CanonicalRow& row, std::span<const std::uint8_t> a);
/// Integral-data variant; callers guarantee the row is integral.
std::int64_t evaluate_row_exact(const CanonicalRow& row, std::span<const std::uint8_t> a);

struct RowViolation {
  std::size_t row = 0;
  double amount = 0.0;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<RowViolation> violated;
};

FeasibilityReport check_feasible(const CanonicalProblem& cp, std::span<const std::uint8_t> a);
bool is_feasible(const CanonicalProblem& cp, std::span<const std::uint8_t> a);

/// Row data flattened into CSR arrays for repeated exact checks in the
/// integrator's inner loop. Integral problems are checked in int64.
class FeasibilityChecker {
 public:
  explicit FeasibilityChecker(const CanonicalProblem& cp);

  bool feasible(std::span<const std::uint8_t> a) const;
  std::size_t violated_count(std::span<const std::uint8_t> a) const;

 private:
  double activity_minus_rhs(std::size_t row, std::span<const std::uint8_t> a) const;

  bool integral_ = true;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> vars_;
  std::vector<std::int64_t> icoef_;
  std::vector<std::int64_t> irhs_;
  std::vector<double> dcoef_;
  std::vector<double> drhs_;
};

/// c.x + offset in canonical (minimization) sense.
double objective_value(const CanonicalProblem& cp, std::span<const std::uint8_t> a);

/// Converts a canonical objective value back into the original sense.
double to_original_objective(const CanonicalProblem& cp, double canonical_value);

OriginalAssignment decode(const VarMap& vm, std::span<const std::uint8_t> a);

/// Adds `c.x <= bound - offset`. A +infinity bound leaves cp unchanged.
CanonicalProblem add_objective_bound(const CanonicalProblem& cp, double bound);

/// Name given to the row appended by add_objective_bound.
inline constexpr const char* kObjectiveBoundRow = "__objective_bound";

// Exact evaluation directly on the user-facing problem, used to verify
// solutions independently of canonicalization.
struct OriginalCheck {
  bool complete = true;                 // every variable has a value
  std::vector<std::string> missing;     // variables without a value
  std::vector<std::string> unknown;     // values naming no declared variable
  std::vector<std::string> out_of_bounds;
  std::vector<std::pair<std::string, double>> violated_rows;  // (row, amount)
  double objective = 0.0;               // in the problem's own sense

  bool feasible() const {
    return complete && unknown.empty() && out_of_bounds.empty() && violated_rows.empty();
  }
};

OriginalCheck check_original(const IlpProblem& problem, const OriginalAssignment& values);

// Sums with Neumaier compensation; used wherever non-integral data is summed.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace memilp

#endif  // MEMILP_MODEL_HPP_
