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

#include <cmath>
#include <random>

#include "doctest.h"
#include "memilp/circuit.hpp"
#include "support.hpp"

using namespace memilp;

namespace {

CanonicalProblem rows_of(std::size_t n, std::vector<CanonicalRow> rows) {
  CanonicalProblem cp;
  cp.n = n;
  cp.rows = std::move(rows);
  return cp;
}

Soag gate_of(std::vector<Term> terms, double rhs) {
  const Soac c = build_circuit(rows_of(8, {{"g", std::move(terms), rhs}}));
  REQUIRE(c.gates().size() == 1);
  return c.gates()[0];
}

}  // namespace

TEST_CASE("build_circuit examples") {
  SUBCASE("inert row is dropped") {
    const Soac c = build_circuit(rows_of(2, {{"r", {{0, 1.0}, {1, 1.0}}, 2.0}}));
    CHECK(c.gates().empty());
    CHECK(c.dropped() == std::vector<std::size_t>{0});
    CHECK_FALSE(c.trivially_infeasible());
  }
  SUBCASE("impossible row marks the circuit") {
    const Soac c = build_circuit(rows_of(1, {{"r", {{0, 1.0}}, -1.0}}));
    REQUIRE(c.trivially_infeasible());
    CHECK(*c.trivially_infeasible() == 0);
  }
  SUBCASE("empty rows") {
    CHECK(build_circuit(rows_of(1, {{"r", {}, 0.0}})).dropped().size() == 1);
    CHECK(build_circuit(rows_of(1, {{"r", {}, -1.0}})).trivially_infeasible());
  }
  SUBCASE("shared variable appears in both adjacency lists") {
    const Soac c = build_circuit(
        rows_of(3, {{"a", {{0, 1.0}, {1, 1.0}}, 1.0}, {"b", {{1, 1.0}, {2, 1.0}}, 1.0}}));
    REQUIRE(c.gates().size() == 2);
    const auto adj = c.adjacency(1);
    REQUIRE(adj.size() == 2);
    CHECK(adj[0] == GateRef{0, 1});
    CHECK(adj[1] == GateRef{1, 0});
    CHECK(c.adjacency(0).size() == 1);
    CHECK(c.nnz() == 4);
  }
  SUBCASE("normalizers") {
    const Soag g = gate_of({{0, 3.0}, {1, -2.0}, {2, 1.0}}, 1.0);
    CHECK(g.norm == 6.0);
    CHECK(g.max_violation == 3.0);
  }
}

TEST_CASE("violation examples") {
  const Soag g = gate_of({{0, 1.0}, {1, 1.0}}, 1.0);
  const std::vector<double> high{1.0, 1.0, 0, 0, 0, 0, 0, 0};
  const std::vector<double> low{-1.0, -1.0, 0, 0, 0, 0, 0, 0};
  CHECK(raw_violation(g, high) == 1.0);
  CHECK(violation(g, high) == 1.0);
  CHECK(raw_violation(g, low) == -1.0);
  CHECK(violation(g, low) == 0.0);

  const Soag scaled = gate_of({{0, 10.0}, {1, 10.0}}, 10.0);
  const std::vector<double> mid{0.3, -0.1, 0, 0, 0, 0, 0, 0};
  CHECK(violation(scaled, mid) == doctest::Approx(violation(g, mid)).epsilon(1e-14));
}

TEST_CASE("correction current examples") {
  const Soag g = gate_of({{0, 1.0}, {1, 1.0}}, 1.0);
  const std::vector<double> high{1.0, 1.0, 0, 0, 0, 0, 0, 0};
  const auto i = correction_currents(g, high);
  REQUIRE(i.size() == 2);
  CHECK(i[0] == std::pair<std::size_t, double>{0, -0.5});
  CHECK(i[1] == std::pair<std::size_t, double>{1, -0.5});

  const std::vector<double> low{-1.0, -1.0, 0, 0, 0, 0, 0, 0};
  for (const auto& [j, current] : correction_currents(g, low)) CHECK(current == 0.0);

  const Soag force = gate_of({{0, -1.0}}, -1.0);
  const std::vector<double> down{-1.0, 0, 0, 0, 0, 0, 0, 0};
  CHECK(violation(force, down) == 1.0);
  CHECK(correction_currents(force, down)[0].second == 1.0);
}

TEST_CASE("row scaling leaves violation and currents unchanged") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const CanonicalProblem cp = memilp::testing::random_canonical(seed, 10, 4, 0.5, seed % 2 == 0);
    CanonicalProblem scaled = cp;
    const double k = scale(rng);
    for (CanonicalRow& row : scaled.rows) {
      for (Term& t : row.terms) t.coef *= k;
      row.rhs *= k;
    }
    const Soac a = build_circuit(cp);
    const Soac b = build_circuit(scaled);
    REQUIRE(a.gates().size() == b.gates().size());
    const auto v = memilp::testing::random_voltages(rng, cp.n);
    for (std::size_t g = 0; g < a.gates().size(); ++g) {
      CHECK(std::abs(violation(a.gates()[g], v) - violation(b.gates()[g], v)) <= 1e-12);
      const auto ia = correction_currents(a.gates()[g], v);
      const auto ib = correction_currents(b.gates()[g], v);
      for (std::size_t t = 0; t < ia.size(); ++t) {
        CHECK(std::abs(ia[t].second - ib[t].second) <= 1e-12);
      }
    }
  }
}

TEST_CASE("currents descend the raw violation") {
  std::mt19937_64 rng(5);
  std::size_t interior = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const Soac c = build_circuit(memilp::testing::random_canonical(seed, 8, 3, 0.6, seed % 3 == 0));
    const auto v = memilp::testing::random_voltages(rng, c.n());
    for (const Soag& g : c.gates()) {
      const double cv = violation(g, v);
      const auto currents = correction_currents(g, v);
      double directional = 0.0;
      double sq = 0.0;
      for (std::size_t t = 0; t < currents.size(); ++t) {
        directional += g.terminals[t].coef * currents[t].second;
        sq += g.terminals[t].coef * g.terminals[t].coef;
        CHECK(std::abs(currents[t].second) <= 1.0);
      }
      if (cv > 0.0 && cv < 1.0) {
        ++interior;
        CHECK(directional < 0.0);
        CHECK(directional == doctest::Approx(-cv / g.norm * sq).epsilon(1e-12));
      }
    }
  }
  CHECK(interior > 50);
}

TEST_CASE("violation is Lipschitz in each terminal") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> step(-0.2, 0.2);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Soac c = build_circuit(memilp::testing::random_canonical(seed, 8, 3, 0.6, seed % 2 == 1));
    for (const Soag& g : c.gates()) {
      auto v = memilp::testing::random_voltages(rng, c.n());
      for (const Term& t : g.terminals) {
        auto w = v;
        w[t.var] = std::clamp(w[t.var] + step(rng), -1.0, 1.0);
        const double dx = 0.5 * std::abs(w[t.var] - v[t.var]);
        const double bound = std::abs(t.coef) / g.max_violation * dx;
        CHECK(std::abs(violation(g, w) - violation(g, v)) <= bound + 1e-12);
      }
    }
  }
}

TEST_CASE("scatter and gather agree bit for bit") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Soac c = build_circuit(memilp::testing::random_canonical(seed, 20, 15, 0.3, seed % 2 == 0));
    const auto v = memilp::testing::random_voltages(rng, c.n());
    CHECK(aggregate_currents_scatter(c, v) == aggregate_currents_gather(c, v));
  }
}

TEST_CASE("adjacency is the transpose of the terminal lists") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Soac c = build_circuit(memilp::testing::random_canonical(seed, 15, 12, 0.3));
    std::size_t refs = 0;
    for (std::size_t j = 0; j < c.n(); ++j) {
      std::uint32_t previous = 0;
      bool first = true;
      for (const GateRef& ref : c.adjacency(j)) {
        CHECK(c.gates()[ref.gate].terminals[ref.position].var == j);
        CHECK((first || ref.gate > previous));
        previous = ref.gate;
        first = false;
        ++refs;
      }
    }
    CHECK(refs == c.nnz());
    for (const Soag& g : c.gates()) {
      CHECK(g.norm > 0.0);
      CHECK(g.max_violation > 0.0);
      for (std::size_t t = 1; t < g.terminals.size(); ++t) {
        CHECK(g.terminals[t - 1].var < g.terminals[t].var);
      }
    }
  }
}
