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

#include "memilp/model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>
#include <unordered_map>

namespace memilp {

namespace {

__extension__ using Wide = __int128;

// Values above this magnitude are not treated as exact integers.
constexpr double kExactLimit = 4503599627370496.0;  // 2^52

bool is_exact_integer(double x) {
  return std::isfinite(x) && std::abs(x) <= kExactLimit && std::trunc(x) == x;
}

std::string join_defects(const std::vector<Defect>& defects) {
  std::string out = "invalid problem:";
  for (const Defect& d : defects) {
    out += " [" + d.entity + ": " + d.message + "]";
  }
  return out;
}

}  // namespace

InvalidProblem::InvalidProblem(std::vector<Defect> defects)
    : std::runtime_error(join_defects(defects)), defects_(std::move(defects)) {}

std::vector<Defect> validate(const IlpProblem& problem) {
  std::vector<Defect> defects;
  std::set<std::string> names;
  for (const Variable& v : problem.variables) {
    if (v.name.empty()) {
      defects.push_back({"variable", "empty name"});
      continue;
    }
    if (!names.insert(v.name).second) {
      defects.push_back({"variable " + v.name, "duplicate name \"" + v.name + "\""});
    }
    if (v.kind == VarKind::kInteger) {
      if (v.lower > v.upper) {
        defects.push_back({"variable " + v.name, "lower bound exceeds upper bound"});
      } else if (v.upper - v.lower > kMaxIntegerRange) {
        defects.push_back({"variable " + v.name, "integer range exceeds 2^30"});
      }
    }
  }

  auto check_coefficients = [&](const std::string& entity, const Coefficients& coefs) {
    for (const auto& [var, coef] : coefs) {
      if (!names.contains(var)) {
        defects.push_back({entity, "unknown variable \"" + var + "\""});
      }
      if (!std::isfinite(coef)) {
        defects.push_back({entity, "non-finite coefficient for \"" + var + "\""});
      }
    }
  };

  for (const Row& row : problem.rows) {
    const std::string entity = "row " + row.name;
    check_coefficients(entity, row.coefficients);
    if (!std::isfinite(row.rhs)) {
      defects.push_back({entity, "non-finite rhs"});
    }
  }
  check_coefficients("objective", problem.objective.coefficients);
  if (!std::isfinite(problem.objective.offset)) {
    defects.push_back({"objective", "non-finite offset"});
  }
  return defects;
}

std::size_t CanonicalProblem::nnz() const {
  std::size_t total = 0;
  for (const CanonicalRow& row : rows) total += row.terms.size();
  return total;
}

std::vector<std::int64_t> expansion_weights(std::int64_t range) {
  if (range < 0 || range > kMaxIntegerRange) {
    throw std::invalid_argument("expansion range out of bounds");
  }
  std::vector<std::int64_t> weights;
  std::int64_t covered = 0;  // 2^m - 1
  std::int64_t next = 1;
  while (covered + next <= range) {
    weights.push_back(next);
    covered += next;
    next *= 2;
  }
  if (range > covered) weights.push_back(range - covered);
  return weights;
}

namespace {

// Row under construction: canonical index -> coefficient.
struct RowBuilder {
  std::map<std::size_t, double> terms;
  double rhs = 0.0;

  std::vector<Term> finish(double sign) const {
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const auto& [var, coef] : terms) {
      if (coef != 0.0) out.push_back({var, sign * coef});
    }
    return out;
  }
};

bool all_integral(const CanonicalProblem& cp) {
  if (!is_exact_integer(cp.offset)) return false;
  for (const Term& t : cp.objective) {
    if (!is_exact_integer(t.coef)) return false;
  }
  for (const CanonicalRow& row : cp.rows) {
    if (!is_exact_integer(row.rhs)) return false;
    double magnitude = std::abs(row.rhs);
    for (const Term& t : row.terms) {
      if (!is_exact_integer(t.coef)) return false;
      magnitude += std::abs(t.coef);
    }
    if (magnitude > kExactLimit) return false;
  }
  return true;
}

}  // namespace

CanonicalProblem canonicalize(const IlpProblem& problem) {
  for (const Variable& v : problem.variables) {
    if (v.kind == VarKind::kInteger && v.lower <= v.upper &&
        v.upper - v.lower > kMaxIntegerRange) {
      throw ExpansionTooLarge(v.name);
    }
  }
  if (auto defects = validate(problem); !defects.empty()) {
    throw InvalidProblem(std::move(defects));
  }

  CanonicalProblem cp;
  cp.original_sense = problem.sense;
  std::unordered_map<std::string, std::size_t> index_of;
  for (std::size_t k = 0; k < problem.variables.size(); ++k) {
    const Variable& v = problem.variables[k];
    index_of.emplace(v.name, k);
    VarMapping mapping;
    mapping.name = v.name;
    mapping.lower = v.lower_bound();
    mapping.upper = v.upper_bound();
    if (v.kind == VarKind::kBinary) {
      mapping.direct = true;
      mapping.base = 0;
      mapping.bits.emplace_back(cp.n++, 1);
    } else {
      mapping.direct = false;
      mapping.base = v.lower;
      for (std::int64_t w : expansion_weights(v.upper - v.lower)) {
        mapping.bits.emplace_back(cp.n++, w);
      }
    }
    cp.var_map.push_back(std::move(mapping));
  }

  // Substitutes x = base + sum(w_k y_k) into a linear form.
  auto expand = [&](const Coefficients& coefs, RowBuilder& out, double& constant) {
    for (const auto& [name, coef] : coefs) {
      if (coef == 0.0) continue;
      const VarMapping& m = cp.var_map[index_of.at(name)];
      constant += coef * static_cast<double>(m.base);
      for (const auto& [bit, weight] : m.bits) {
        out.terms[bit] += coef * static_cast<double>(weight);
      }
    }
  };

  for (const Row& row : problem.rows) {
    RowBuilder builder;
    double constant = 0.0;
    expand(row.coefficients, builder, constant);
    const double rhs = row.rhs - constant;
    switch (row.relation) {
      case Relation::kLessEqual:
        cp.rows.push_back({row.name, builder.finish(1.0), rhs});
        break;
      case Relation::kGreaterEqual:
        cp.rows.push_back({row.name, builder.finish(-1.0), -rhs});
        break;
      case Relation::kEqual:
        cp.rows.push_back({row.name + ".le", builder.finish(1.0), rhs});
        cp.rows.push_back({row.name + ".ge", builder.finish(-1.0), -rhs});
        break;
    }
  }

  RowBuilder objective;
  double constant = 0.0;
  expand(problem.objective.coefficients, objective, constant);
  const double sign = problem.sense == Sense::kMaximize ? -1.0 : 1.0;
  cp.objective = objective.finish(sign);
  cp.offset = sign * (problem.objective.offset + constant);
  if (cp.offset == 0.0) cp.offset = 0.0;  // normalize -0
  cp.integral = all_integral(cp);
  return cp;
}

std::int64_t evaluate_row_exact(const CanonicalRow& row, std::span<const std::uint8_t> a) {
  Wide acc = 0;
  for (const Term& t : row.terms) {
    if (a[t.var]) acc += static_cast<std::int64_t>(t.coef);
  }
  acc -= static_cast<std::int64_t>(row.rhs);
  return static_cast<std::int64_t>(acc);
}

namespace {

bool row_integral(const CanonicalRow& row) {
  if (!is_exact_integer(row.rhs)) return false;
  return std::all_of(row.terms.begin(), row.terms.end(),
                     [](const Term& t) { return is_exact_integer(t.coef); });
}

}  // namespace

double evaluate_row(const CanonicalRow& row, std::span<const std::uint8_t> a) {
  if (row_integral(row)) {
    return static_cast<double>(evaluate_row_exact(row, a));
  }
  CompensatedSum sum;
  for (const Term& t : row.terms) {
    if (a[t.var]) sum.add(t.coef);
  }
  sum.add(-row.rhs);
  return sum.value();
}

FeasibilityReport check_feasible(const CanonicalProblem& cp, std::span<const std::uint8_t> a) {
  assert(a.size() == cp.n);
  FeasibilityReport report;
  for (std::size_t i = 0; i < cp.rows.size(); ++i) {
    const double r = evaluate_row(cp.rows[i], a);
    if (r > 0.0) {
      report.feasible = false;
      report.violated.push_back({i, r});
    }
  }
  return report;
}

bool is_feasible(const CanonicalProblem& cp, std::span<const std::uint8_t> a) {
  return std::all_of(cp.rows.begin(), cp.rows.end(),
                     [&](const CanonicalRow& row) { return evaluate_row(row, a) <= 0.0; });
}

FeasibilityChecker::FeasibilityChecker(const CanonicalProblem& cp) : integral_(cp.integral) {
  offsets_.reserve(cp.rows.size() + 1);
  for (const CanonicalRow& row : cp.rows) {
    for (const Term& t : row.terms) {
      vars_.push_back(static_cast<std::uint32_t>(t.var));
      if (integral_) {
        icoef_.push_back(static_cast<std::int64_t>(t.coef));
      } else {
        dcoef_.push_back(t.coef);
      }
    }
    if (integral_) {
      irhs_.push_back(static_cast<std::int64_t>(row.rhs));
    } else {
      drhs_.push_back(row.rhs);
    }
    offsets_.push_back(vars_.size());
  }
}

double FeasibilityChecker::activity_minus_rhs(std::size_t row,
                                              std::span<const std::uint8_t> a) const {
  if (integral_) {
    std::int64_t acc = -irhs_[row];
    for (std::size_t k = offsets_[row]; k < offsets_[row + 1]; ++k) {
      acc += a[vars_[k]] ? icoef_[k] : 0;
    }
    return static_cast<double>(acc);
  }
  CompensatedSum sum;
  for (std::size_t k = offsets_[row]; k < offsets_[row + 1]; ++k) {
    if (a[vars_[k]]) sum.add(dcoef_[k]);
  }
  sum.add(-drhs_[row]);
  return sum.value();
}

bool FeasibilityChecker::feasible(std::span<const std::uint8_t> a) const {
  const std::size_t rows = offsets_.size() - 1;
  for (std::size_t i = 0; i < rows; ++i) {
    if (activity_minus_rhs(i, a) > 0.0) return false;
  }
  return true;
}

std::size_t FeasibilityChecker::violated_count(std::span<const std::uint8_t> a) const {
  const std::size_t rows = offsets_.size() - 1;
  std::size_t count = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (activity_minus_rhs(i, a) > 0.0) ++count;
  }
  return count;
}

double objective_value(const CanonicalProblem& cp, std::span<const std::uint8_t> a) {
  assert(a.size() == cp.n);
  if (cp.integral) {
    Wide acc = static_cast<std::int64_t>(cp.offset);
    for (const Term& t : cp.objective) {
      if (a[t.var]) acc += static_cast<std::int64_t>(t.coef);
    }
    return static_cast<double>(acc);
  }
  CompensatedSum sum;
  for (const Term& t : cp.objective) {
    if (a[t.var]) sum.add(t.coef);
  }
  sum.add(cp.offset);
  return sum.value();
}

double to_original_objective(const CanonicalProblem& cp, double canonical_value) {
  const double v = cp.original_sense == Sense::kMaximize ? -canonical_value : canonical_value;
  return v == 0.0 ? 0.0 : v;
}

OriginalAssignment decode(const VarMap& vm, std::span<const std::uint8_t> a) {
  OriginalAssignment out;
  for (const VarMapping& m : vm) {
    std::int64_t value = m.base;
    for (const auto& [bit, weight] : m.bits) {
      if (a[bit]) value += weight;
    }
    out.emplace(m.name, value);
  }
  return out;
}

CanonicalProblem add_objective_bound(const CanonicalProblem& cp, double bound) {
  if (std::isinf(bound) && bound > 0) return cp;
  CanonicalProblem out = cp;
  out.rows.push_back({kObjectiveBoundRow, cp.objective, bound - cp.offset});
  out.integral = all_integral(out);
  return out;
}

OriginalCheck check_original(const IlpProblem& problem, const OriginalAssignment& values) {
  OriginalCheck check;
  std::set<std::string> declared;
  for (const Variable& v : problem.variables) {
    declared.insert(v.name);
    const auto it = values.find(v.name);
    if (it == values.end()) {
      check.complete = false;
      check.missing.push_back(v.name);
      continue;
    }
    if (it->second < v.lower_bound() || it->second > v.upper_bound()) {
      check.out_of_bounds.push_back(v.name);
    }
  }
  for (const auto& [name, value] : values) {
    if (!declared.contains(name)) check.unknown.push_back(name);
  }
  if (!check.complete) return check;

  bool integral = is_exact_integer(problem.objective.offset);
  auto linear_integral = [](const Coefficients& coefs) {
    return std::all_of(coefs.begin(), coefs.end(),
                       [](const auto& kv) { return is_exact_integer(kv.second); });
  };
  integral = integral && linear_integral(problem.objective.coefficients);
  for (const Row& row : problem.rows) {
    integral = integral && is_exact_integer(row.rhs) && linear_integral(row.coefficients);
  }
  for (const auto& [name, value] : values) {
    integral = integral && std::abs(value) <= (std::int64_t{1} << 40);
  }

  // lhs - rhs, exactly for integral data.
  auto residual = [&](const Coefficients& coefs, double rhs) -> double {
    if (integral) {
      Wide acc = -static_cast<std::int64_t>(rhs);
      for (const auto& [name, coef] : coefs) {
        acc += static_cast<Wide>(static_cast<std::int64_t>(coef)) * values.at(name);
      }
      return static_cast<double>(acc);
    }
    CompensatedSum sum;
    for (const auto& [name, coef] : coefs) {
      sum.add(coef * static_cast<double>(values.at(name)));
    }
    sum.add(-rhs);
    return sum.value();
  };

  for (const Row& row : problem.rows) {
    const double r = residual(row.coefficients, row.rhs);
    double amount = 0.0;
    switch (row.relation) {
      case Relation::kLessEqual: amount = r; break;
      case Relation::kGreaterEqual: amount = -r; break;
      case Relation::kEqual: amount = std::abs(r); break;
    }
    if (amount > 0.0) check.violated_rows.emplace_back(row.name, amount);
  }
  check.objective = residual(problem.objective.coefficients, -problem.objective.offset);
  if (check.objective == 0.0) check.objective = 0.0;
  return check;
}

}  // namespace memilp
