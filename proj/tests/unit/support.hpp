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

// Helpers shared by the unit tests and the acceptance binary.

#ifndef MEMILP_TESTS_SUPPORT_HPP_
#define MEMILP_TESTS_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "memilp/model.hpp"

namespace memilp::testing {

class ProblemBuilder {
 public:
  explicit ProblemBuilder(std::string name = "t") { p_.name = std::move(name); }

  ProblemBuilder& binary(const std::string& name) {
    p_.variables.push_back({name, VarKind::kBinary, 0, 1});
    return *this;
  }
  ProblemBuilder& integer(const std::string& name, std::int64_t lo, std::int64_t hi) {
    p_.variables.push_back({name, VarKind::kInteger, lo, hi});
    return *this;
  }
  ProblemBuilder& row(const std::string& name,
                      std::initializer_list<std::pair<const std::string, double>> coefs,
                      Relation rel, double rhs) {
    p_.rows.push_back({name, Coefficients(coefs), rel, rhs});
    return *this;
  }
  ProblemBuilder& minimize(std::initializer_list<std::pair<const std::string, double>> coefs,
                           double offset = 0.0) {
    p_.objective = {Coefficients(coefs), offset};
    p_.sense = Sense::kMinimize;
    return *this;
  }
  ProblemBuilder& maximize(std::initializer_list<std::pair<const std::string, double>> coefs,
                           double offset = 0.0) {
    p_.objective = {Coefficients(coefs), offset};
    p_.sense = Sense::kMaximize;
    return *this;
  }
  IlpProblem build() const { return p_; }

 private:
  IlpProblem p_;
};

inline Assignment bits_of(std::uint64_t mask, std::size_t n) {
  Assignment a(n);
  for (std::size_t j = 0; j < n; ++j) a[j] = (mask >> j) & 1U;
  return a;
}

// Calls f on every original-space assignment inside the declared bounds.
inline void for_each_original(const IlpProblem& p,
                              const std::function<void(const OriginalAssignment&)>& f) {
  OriginalAssignment values;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == p.variables.size()) {
      f(values);
      return;
    }
    const Variable& v = p.variables[i];
    for (std::int64_t x = v.lower_bound(); x <= v.upper_bound(); ++x) {
      values[v.name] = x;
      rec(i + 1);
    }
  };
  rec(0);
}

// Small mixed problem: binaries and narrow integers, all three relations,
// integral data, either sense. Total expanded bits stay at or below max_bits.
inline IlpProblem random_problem(std::uint64_t seed, std::size_t max_bits = 12) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  IlpProblem p;
  p.name = "rand" + std::to_string(seed);
  std::size_t bits = 0;
  const auto vars = static_cast<std::size_t>(pick(1, 6));
  for (std::size_t j = 0; j < vars && bits < max_bits; ++j) {
    Variable v;
    v.name = "v" + std::to_string(j);
    if (pick(0, 2) == 0 && bits + 3 <= max_bits) {
      v.kind = VarKind::kInteger;
      v.lower = pick(-2, 2);
      v.upper = v.lower + pick(0, 5);
      bits += expansion_weights(v.upper - v.lower).size();
    } else {
      ++bits;
    }
    p.variables.push_back(v);
  }
  const auto rows = static_cast<std::size_t>(pick(0, 4));
  for (std::size_t i = 0; i < rows; ++i) {
    Row r;
    r.name = "r" + std::to_string(i);
    for (const Variable& v : p.variables) {
      if (pick(0, 2) != 0) {
        const auto c = static_cast<double>(pick(-4, 4));
        if (c != 0) r.coefficients[v.name] = c;
      }
    }
    r.relation = static_cast<Relation>(pick(0, 2));
    r.rhs = static_cast<double>(pick(-4, 6));
    p.rows.push_back(r);
  }
  for (const Variable& v : p.variables) {
    if (pick(0, 1) == 0) p.objective.coefficients[v.name] = static_cast<double>(pick(-5, 5));
  }
  p.objective.offset = static_cast<double>(pick(-3, 3));
  p.sense = pick(0, 1) == 0 ? Sense::kMinimize : Sense::kMaximize;
  return p;
}

// Random canonical problem straight in <=-form. With `real` the
// coefficients are non-integral. Rows are kept non-trivial where possible.
inline CanonicalProblem random_canonical(std::uint64_t seed, std::size_t n, std::size_t m,
                                         double density = 0.5, bool real = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> coef(-6, 6);
  CanonicalProblem cp;
  cp.n = n;
  for (std::size_t j = 0; j < n; ++j) {
    cp.var_map.push_back({"y" + std::to_string(j), true, 0, 0, 1, {{j, 1}}});
  }
  for (std::size_t i = 0; i < m; ++i) {
    CanonicalRow row;
    row.name = "g" + std::to_string(i);
    double positive = 0.0;
    double negative = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (unit(rng) >= density) continue;
      double a = coef(rng);
      if (a == 0.0) a = 1.0;
      if (real) a += unit(rng) - 0.5;
      row.terms.push_back({j, a});
      (a > 0 ? positive : negative) += a;
    }
    if (row.terms.empty()) row.terms.push_back({static_cast<std::size_t>(rng() % n), 1.0});
    // rhs strictly between the least and greatest activity keeps the gate live.
    const double lo = negative;
    const double hi = positive;
    row.rhs = real ? lo + (hi - lo) * unit(rng) : std::floor(lo + (hi - lo) * unit(rng));
    cp.rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (unit(rng) < 0.5) cp.objective.push_back({j, static_cast<double>(coef(rng))});
  }
  cp.integral = !real;
  return cp;
}

inline std::vector<double> random_voltages(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace memilp::testing

#endif  // MEMILP_TESTS_SUPPORT_HPP_
