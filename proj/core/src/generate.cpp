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

#include <algorithm>
#include <random>
#include <stdexcept>

#include "memilp/ingest.hpp"

namespace memilp {

namespace {

// std::uniform_int_distribution is implementation-defined; draws are done by
// hand so instances are identical across standard libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
  }

  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 engine_;
};

std::string var_name(std::size_t j) { return "x" + std::to_string(j); }

std::vector<Variable> binaries(std::size_t n) {
  std::vector<Variable> vars(n);
  for (std::size_t j = 0; j < n; ++j) vars[j].name = var_name(j);
  return vars;
}

// Columns selected for one row; never empty.
std::vector<std::size_t> pick_support(Draw& draw, std::size_t n, double density) {
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < n; ++j) {
    if (draw.chance(density)) support.push_back(j);
  }
  if (support.empty()) support.push_back(static_cast<std::size_t>(draw.below(n)));
  return support;
}

std::int64_t nonzero_coefficient(Draw& draw, std::int64_t lo, std::int64_t hi) {
  for (;;) {
    const std::int64_t c = draw.between(lo, hi);
    if (c != 0) return c;
  }
}

void check_spec(const GenSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) {
    throw std::invalid_argument("density must lie in (0, 1]");
  }
  if (spec.density * static_cast<double>(spec.n) < 1.0) {
    throw std::invalid_argument("density * n must be at least 1");
  }
  if (spec.coeff_min > spec.coeff_max) {
    throw std::invalid_argument("coeff_min exceeds coeff_max");
  }
  if (spec.kind == GenKind::kPlantedRandom && spec.coeff_min == 0 && spec.coeff_max == 0) {
    throw std::invalid_argument("coefficient range contains no nonzero value");
  }
}

std::string instance_name(const GenSpec& spec) {
  return to_string(spec.kind) + "-n" + std::to_string(spec.n) + "-m" + std::to_string(spec.m) +
         "-s" + std::to_string(spec.seed);
}

GeneratedInstance planted_random(const GenSpec& spec, Draw& draw) {
  GeneratedInstance out;
  IlpProblem& p = out.problem;
  p.variables = binaries(spec.n);
  std::vector<std::int64_t> planted(spec.n);
  OriginalAssignment witness;
  for (std::size_t j = 0; j < spec.n; ++j) {
    planted[j] = static_cast<std::int64_t>(draw.below(2));
    witness[var_name(j)] = planted[j];
  }
  for (std::size_t i = 0; i < spec.m; ++i) {
    Row row;
    row.name = "r" + std::to_string(i);
    std::int64_t activity = 0;
    for (std::size_t j : pick_support(draw, spec.n, spec.density)) {
      const std::int64_t a = nonzero_coefficient(draw, spec.coeff_min, spec.coeff_max);
      row.coefficients[var_name(j)] = static_cast<double>(a);
      activity += a * planted[j];
    }
    const auto slack = static_cast<std::int64_t>(draw.below(4));
    row.rhs = static_cast<double>(activity + slack);
    p.rows.push_back(std::move(row));
  }
  out.planted = std::move(witness);
  return out;
}

GeneratedInstance set_cover(const GenSpec& spec, Draw& draw) {
  GeneratedInstance out;
  IlpProblem& p = out.problem;
  p.variables = binaries(spec.n);
  const std::int64_t cost_max = std::max<std::int64_t>(1, spec.coeff_max);
  for (std::size_t i = 0; i < spec.m; ++i) {
    Row row;
    row.name = "cover" + std::to_string(i);
    row.relation = Relation::kGreaterEqual;
    row.rhs = 1.0;
    for (std::size_t j : pick_support(draw, spec.n, spec.density)) {
      row.coefficients[var_name(j)] = 1.0;
    }
    p.rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < spec.n; ++j) {
    p.objective.coefficients[var_name(j)] = static_cast<double>(draw.between(1, cost_max));
  }
  p.sense = Sense::kMinimize;
  return out;
}

GeneratedInstance knapsack(const GenSpec& spec, Draw& draw) {
  GeneratedInstance out;
  IlpProblem& p = out.problem;
  p.variables = binaries(spec.n);
  const std::int64_t hi = std::max<std::int64_t>(1, spec.coeff_max);
  for (std::size_t i = 0; i < spec.m; ++i) {
    Row row;
    row.name = "capacity" + std::to_string(i);
    std::int64_t total = 0;
    for (std::size_t j : pick_support(draw, spec.n, spec.density)) {
      const std::int64_t w = draw.between(1, hi);
      row.coefficients[var_name(j)] = static_cast<double>(w);
      total += w;
    }
    row.rhs = static_cast<double>(total / 2);
    p.rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < spec.n; ++j) {
    p.objective.coefficients[var_name(j)] = static_cast<double>(draw.between(1, hi));
  }
  p.sense = Sense::kMaximize;
  return out;
}

}  // namespace

std::string to_string(GenKind kind) {
  switch (kind) {
    case GenKind::kPlantedRandom: return "planted-random";
    case GenKind::kSetCover: return "set-cover";
    case GenKind::kKnapsack: return "knapsack";
  }
  return "planted-random";
}

std::optional<GenKind> gen_kind_from_string(std::string_view name) {
  if (name == "planted-random") return GenKind::kPlantedRandom;
  if (name == "set-cover") return GenKind::kSetCover;
  if (name == "knapsack") return GenKind::kKnapsack;
  return std::nullopt;
}

GeneratedInstance generate(const GenSpec& spec) {
  check_spec(spec);
  Draw draw(spec.seed);
  GeneratedInstance out;
  switch (spec.kind) {
    case GenKind::kPlantedRandom: out = planted_random(spec, draw); break;
    case GenKind::kSetCover: out = set_cover(spec, draw); break;
    case GenKind::kKnapsack: out = knapsack(spec, draw); break;
  }
  out.problem.name = instance_name(spec);
  return out;
}

}  // namespace memilp
