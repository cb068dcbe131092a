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

#include "memilp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace memilp {

namespace {

template <typename T>
struct ColumnEntry {
  std::size_t row;
  T coef;
};

// Column-major copy of the rows plus objective, in T arithmetic.
template <typename T>
struct Columns {
  std::vector<std::vector<ColumnEntry<T>>> entries;
  std::vector<T> objective;
  std::vector<T> rhs;
  T offset{};

  explicit Columns(const CanonicalProblem& cp)
      : entries(cp.n), objective(cp.n, T{}), rhs(cp.rows.size()) {
    for (std::size_t i = 0; i < cp.rows.size(); ++i) {
      rhs[i] = static_cast<T>(cp.rows[i].rhs);
      for (const Term& t : cp.rows[i].terms) {
        entries[t.var].push_back({i, static_cast<T>(t.coef)});
      }
    }
    for (const Term& t : cp.objective) objective[t.var] += static_cast<T>(t.coef);
    offset = static_cast<T>(cp.offset);
  }
};

// Scans assignments in lexicographic order (x_0 most significant), flipping
// bits incrementally so each step costs the degree of the flipped columns.
OracleResult enumerate_integral(const CanonicalProblem& cp) {
  const Columns<std::int64_t> cols(cp);
  const std::size_t n = cp.n;
  std::vector<std::int64_t> activity(cp.rows.size(), 0);
  std::size_t violated = 0;
  for (std::size_t i = 0; i < cp.rows.size(); ++i) {
    if (activity[i] > cols.rhs[i]) ++violated;
  }
  std::int64_t value = cols.offset;
  Assignment x(n, 0);

  OracleResult result;
  std::int64_t best = 0;
  auto consider = [&] {
    ++result.nodes;
    if (violated == 0 && (!result.feasible || value < best)) {
      result.feasible = true;
      best = value;
      result.witness = x;
    }
  };
  auto flip = [&](std::size_t j) {
    const std::int64_t sign = x[j] ? -1 : 1;
    x[j] ^= 1;
    value += sign * cols.objective[j];
    for (const auto& e : cols.entries[j]) {
      const bool before = activity[e.row] > cols.rhs[e.row];
      activity[e.row] += sign * e.coef;
      const bool after = activity[e.row] > cols.rhs[e.row];
      if (before != after) after ? ++violated : --violated;
    }
  };

  consider();
  for (;;) {
    // Increment the n-bit counter whose least significant bit is x[n-1].
    std::size_t p = n;
    while (p > 0 && x[p - 1]) flip(--p);
    if (p == 0) break;
    flip(p - 1);
    consider();
  }
  result.optimum = static_cast<double>(best);
  return result;
}

OracleResult enumerate_general(const CanonicalProblem& cp) {
  const std::size_t n = cp.n;
  OracleResult result;
  Assignment x(n, 0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k < total; ++k) {
    for (std::size_t j = 0; j < n; ++j) x[j] = (k >> (n - 1 - j)) & 1;
    ++result.nodes;
    if (!is_feasible(cp, x)) continue;
    const double value = objective_value(cp, x);
    if (!result.feasible || value < result.optimum) {
      result.feasible = true;
      result.optimum = value;
      result.witness = x;
    }
  }
  return result;
}

template <typename T>
class BranchAndBound {
 public:
  explicit BranchAndBound(const CanonicalProblem& cp)
      : cp_(cp),
        cols_(cp),
        activity_(cp.rows.size(), T{}),
        free_min_(cp.rows.size(), T{}),
        tolerance_(cp.rows.size(), T{}),
        x_(cp.n, 0) {
    for (std::size_t j = 0; j < cp.n; ++j) {
      for (const auto& e : cols_.entries[j]) free_min_[e.row] += std::min(T{}, e.coef);
      objective_free_min_ += std::min(T{}, cols_.objective[j]);
    }
    if constexpr (std::is_floating_point_v<T>) {
      for (std::size_t i = 0; i < cp.rows.size(); ++i) {
        T scale = std::abs(cols_.rhs[i]) + 1;
        for (const Term& t : cp.rows[i].terms) scale += std::abs(t.coef);
        tolerance_[i] = 1e-9 * scale;
      }
    }
  }

  OracleResult run() {
    bool root_ok = true;
    for (std::size_t i = 0; i < cp_.rows.size(); ++i) {
      root_ok = root_ok && free_min_[i] <= cols_.rhs[i] + tolerance_[i];
    }
    if (root_ok) search(0, cols_.offset);
    result_.optimum = static_cast<double>(best_);
    return result_;
  }

 private:
  void search(std::size_t j, T partial) {
    ++result_.nodes;
    if (j == cp_.n) {
      if constexpr (std::is_floating_point_v<T>) {
        if (!is_feasible(cp_, x_)) return;
        const double exact = objective_value(cp_, x_);
        if (result_.feasible && !(exact < best_)) return;
        best_ = exact;
      } else {
        best_ = partial;
      }
      result_.feasible = true;
      result_.witness = x_;
      return;
    }
    const T c = cols_.objective[j];
    objective_free_min_ -= std::min(T{}, c);
    for (std::uint8_t value : {std::uint8_t{0}, std::uint8_t{1}}) {
      x_[j] = value;
      const T next = partial + (value ? c : T{});
      if (objective_pruned(next)) continue;
      if (fix(j, value)) search(j + 1, next);
      unfix(j, value);
    }
    x_[j] = 0;
    objective_free_min_ += std::min(T{}, c);
  }

  bool objective_pruned(T partial) const {
    if (!result_.feasible) return false;
    if constexpr (std::is_floating_point_v<T>) {
      const T bound = partial + objective_free_min_;
      return bound > best_ + 1e-9 * (1 + std::abs(best_));
    } else {
      return partial + objective_free_min_ >= best_;
    }
  }

  // Fixes x_j and reports whether every touched row can still be satisfied.
  bool fix(std::size_t j, std::uint8_t value) {
    bool ok = true;
    for (const auto& e : cols_.entries[j]) {
      free_min_[e.row] -= std::min(T{}, e.coef);
      if (value) activity_[e.row] += e.coef;
      ok = ok && activity_[e.row] + free_min_[e.row] <= cols_.rhs[e.row] + tolerance_[e.row];
    }
    return ok;
  }

  void unfix(std::size_t j, std::uint8_t value) {
    for (const auto& e : cols_.entries[j]) {
      free_min_[e.row] += std::min(T{}, e.coef);
      if (value) activity_[e.row] -= e.coef;
    }
  }

  const CanonicalProblem& cp_;
  Columns<T> cols_;
  std::vector<T> activity_;
  std::vector<T> free_min_;
  std::vector<T> tolerance_;
  T objective_free_min_{};
  Assignment x_;
  T best_{};
  OracleResult result_;
};

}  // namespace

OracleResult enumerate_optimum(const CanonicalProblem& cp) {
  if (cp.n > kEnumerateMaxVars) throw TooLarge(cp.n, kEnumerateMaxVars);
  return cp.integral ? enumerate_integral(cp) : enumerate_general(cp);
}

OracleResult branch_and_bound(const CanonicalProblem& cp) {
  if (cp.n > kBranchAndBoundMaxVars) throw TooLarge(cp.n, kBranchAndBoundMaxVars);
  if (cp.integral) return BranchAndBound<std::int64_t>(cp).run();
  return BranchAndBound<double>(cp).run();
}

}  // namespace memilp
