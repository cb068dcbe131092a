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

#include <atomic>
#include <cmath>
#include <random>

#include "doctest.h"
#include "memilp/dynamics.hpp"
#include "memilp/ingest.hpp"
#include "support.hpp"

using namespace memilp;

namespace {

CanonicalProblem single_row(std::vector<Term> terms, double rhs, std::size_t n = 1) {
  CanonicalProblem cp;
  cp.n = n;
  cp.rows.push_back({"r", std::move(terms), rhs});
  for (std::size_t j = 0; j < n; ++j) {
    cp.var_map.push_back({"x" + std::to_string(j), true, 0, 0, 1, {{j, 1}}});
  }
  return cp;
}

DynState make_state(std::vector<double> v, double xs, double xl, std::size_t gates) {
  DynState s;
  s.v = std::move(v);
  s.xs.assign(gates, xs);
  s.xl.assign(gates, xl);
  return s;
}

}  // namespace

TEST_CASE("parameters") {
  DynParams p;
  CHECK_FALSE(check_params(p));
  CHECK(set_param(p, "dt", "0.05"));
  CHECK(p.dt == 0.05);
  CHECK(set_param(p, "check_every", "4"));
  CHECK(p.check_every == 4);
  CHECK_FALSE(set_param(p, "nope", "1"));
  CHECK_FALSE(set_param(p, "alpha", "fast"));
  DynParams bad;
  bad.delta = 0.3;  // must stay below gamma
  CHECK(check_params(bad));
  bad = DynParams{};
  bad.dv_max = 3.0;
  CHECK(check_params(bad));
  bad = DynParams{};
  bad.xl_max = 0.5;
  CHECK(check_params(bad));
  CHECK(param_list(p).size() == 10);
}

TEST_CASE("init_state") {
  const CanonicalProblem cp = memilp::testing::random_canonical(1, 12, 5);
  const Soac c = build_circuit(cp);
  const DynParams p;
  const DynState a = init_state(c, 42, p);
  const DynState b = init_state(c, 42, p);
  CHECK(a.v == b.v);
  CHECK(a.t == 0.0);
  for (double v : a.v) CHECK((v >= -1.0 && v <= 1.0));
  for (double x : a.xs) CHECK(x == 0.5);
  for (double x : a.xl) CHECK(x == 1.0);
  CHECK(init_state(c, 1, p).v != init_state(c, 2, p).v);

  const Soac empty = build_circuit(CanonicalProblem{});
  const DynState e = init_state(empty, 1, p);
  CHECK(e.v.empty());
  CHECK(e.xs.empty());
}

TEST_CASE("rhs examples") {
  const DynParams p;
  SUBCASE("satisfied digital state with calm memory is at rest") {
    const CanonicalProblem cp = single_row({{0, 1.0}, {1, 1.0}}, 1.0, 2);
    const Soac c = build_circuit(cp);
    const auto d = rhs(c, make_state({1.0, -1.0}, 0.0, 1.0, 1), p);
    CHECK(d.dv == std::vector<double>{0.0, 0.0});
    CHECK(d.dxs[0] == doctest::Approx(-p.beta * p.epsilon * p.gamma));
    CHECK(d.dxl[0] == doctest::Approx(-p.alpha * p.delta));
    CHECK(d.dxs[0] < 0.0);
    CHECK(d.dxl[0] < 0.0);
  }
  SUBCASE("violated single gate pushes down") {
    const Soac c = build_circuit(single_row({{0, 1.0}}, 0.0));
    const auto d = rhs(c, make_state({1.0}, 1.0, 1.0, 1), p);
    CHECK(d.dv[0] == -1.0);
    CHECK(d.dxs[0] > 0.0);
    CHECK(d.dxl[0] > 0.0);
  }
  SUBCASE("empty circuit") {
    const Soac c = build_circuit(CanonicalProblem{});
    const auto d = rhs(c, make_state({}, 0.5, 1.0, 0), p);
    CHECK(d.dv.empty());
    CHECK(d.dxs.empty());
  }
  SUBCASE("rail attraction when calm") {
    const Soac c = build_circuit(single_row({{0, 1.0}, {1, 1.0}}, 1.0, 2));
    // v = (-0.5, -0.5): relaxed row holds, rounding holds, so only rails act.
    const auto d = rhs(c, make_state({-0.5, -0.5}, 0.0, 1.0, 1), p);
    const double expected = (1.0 + p.zeta) * 0.5 * (-1.0 + 0.5) / 2.0;
    CHECK(d.dv[0] == doctest::Approx(expected));
    CHECK(d.dv[1] == doctest::Approx(expected));
  }
}

TEST_CASE("step examples") {
  DynParams p;
  SUBCASE("fixed point only advances time") {
    const Soac c = build_circuit(single_row({{0, 1.0}, {1, 1.0}}, 1.0, 2));
    const DynState s = make_state({1.0, -1.0}, 0.0, 1.0, 1);
    const DynState next = step(c, s, p);
    CHECK(next.v == s.v);
    CHECK(next.xs == s.xs);
    CHECK(next.xl == s.xl);
    CHECK(next.t == doctest::Approx(p.dt));
  }
  SUBCASE("voltage change is clamped") {
    const Soac c = build_circuit(single_row({{0, 1.0}}, 0.0));
    const DynState s = make_state({1.0}, 1.0, 100.0, 1);
    CHECK(rhs(c, s, p).dv[0] == -100.0);
    CHECK(step(c, s, p).v[0] == 0.5);
  }
  SUBCASE("voltage is clamped to the rail") {
    const Soac c = build_circuit(single_row({{0, 1.0}}, 0.0));
    const DynState s = make_state({-0.9}, 1.0, 1000.0, 1);
    CHECK(rhs(c, s, p).dv[0] * p.dt < -0.5);
    CHECK(step(c, s, p).v[0] == -1.0);
  }
}

TEST_CASE("round_voltages") {
  CHECK(round_voltages(std::vector<double>{1.0, -1.0}) == Assignment{1, 0});
  CHECK(round_voltages(std::vector<double>{0.0}) == Assignment{1});
  CHECK(round_voltages(std::vector<double>{0.2, -0.7, 0.0}) == Assignment{1, 0, 1});
}

TEST_CASE("detect_solution") {
  const CanonicalProblem cp = single_row({{0, 1.0}, {1, 1.0}}, 1.0, 2);
  const Soac c = build_circuit(cp);
  const auto ok = detect_solution(c, cp, make_state({0.3, -0.2}, 0.5, 1.0, 1));
  REQUIRE(ok);
  CHECK(*ok == Assignment{1, 0});
  CHECK_FALSE(detect_solution(c, cp, make_state({0.3, 0.2}, 0.5, 1.0, 1)));

  // Inert rows never flip the verdict.
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CanonicalProblem with_inert = memilp::testing::random_canonical(seed, 6, 3);
    CanonicalRow inert{"inert", {{0, 1.0}, {1, 2.0}}, 3.0};
    with_inert.rows.push_back(inert);
    const Soac ci = build_circuit(with_inert);
    CHECK(ci.dropped().size() >= 1);
    CanonicalProblem without = with_inert;
    without.rows.pop_back();
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
      std::vector<double> v(6);
      for (std::size_t j = 0; j < 6; ++j) v[j] = (mask >> j) & 1U ? 1.0 : -1.0;
      const DynState s = make_state(v, 0.5, 1.0, ci.gates().size());
      CHECK(detect_solution(ci, with_inert, s).has_value() ==
            detect_solution(ci, without, s).has_value());
    }
  }
}

TEST_CASE("integrate examples") {
  const DynParams p;
  SUBCASE("trivially infeasible") {
    const CanonicalProblem cp = single_row({{0, 1.0}}, -1.0);
    const auto out = integrate(build_circuit(cp), cp, p, 1, Budget{});
    CHECK(out.status == TrajectoryStatus::kTriviallyInfeasible);
    CHECK(out.steps == 0);
  }
  SUBCASE("single forcing gate") {
    const CanonicalProblem cp = single_row({{0, -1.0}}, -1.0);
    const Soac c = build_circuit(cp);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto out = integrate(c, cp, p, seed, Budget{200, 0.0});
      REQUIRE(out.status == TrajectoryStatus::kSolved);
      CHECK(*out.assignment == Assignment{1});
      CHECK(out.steps <= 200);
    }
  }
  SUBCASE("planted instances: every solution is exactly feasible") {
    std::size_t solved = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      GenSpec spec;
      spec.n = 10;
      spec.m = 8;
      spec.seed = seed;
      const CanonicalProblem cp = canonicalize(generate(spec).problem);
      const auto out = integrate(build_circuit(cp), cp, p, seed, Budget{20000, 0.0});
      if (out.status == TrajectoryStatus::kSolved) {
        ++solved;
        CHECK(check_feasible(cp, *out.assignment).feasible);
      }
    }
    CHECK(solved >= 36);
  }
}

TEST_CASE("trajectories are deterministic and traceable") {
  GenSpec spec;
  spec.n = 12;
  spec.m = 10;
  spec.seed = 4;
  const CanonicalProblem cp = canonicalize(generate(spec).problem);
  const Soac c = build_circuit(cp);
  DynParams p;
  const auto a = integrate(c, cp, p, 9, Budget{300, 0.0});
  const auto b = integrate(c, cp, p, 9, Budget{300, 0.0});
  CHECK(a.steps == b.steps);
  CHECK(a.final_voltages == b.final_voltages);
  CHECK(a.assignment == b.assignment);

  std::vector<std::uint64_t> steps;
  TraceSink sink = [&](const TraceSample& s) {
    steps.push_back(s.step);
    CHECK(s.v.size() == cp.n);
    CHECK((s.max_violation >= 0.0 && s.max_violation <= 1.0));
  };
  p.check_every = 3;
  IntegrateOptions options;
  options.trace = &sink;
  const auto traced = integrate(c, cp, p, 9, Budget{30, 0.0}, options);
  REQUIRE_FALSE(steps.empty());
  CHECK(steps.front() == 0);
  for (std::size_t k = 1; k < steps.size(); ++k) CHECK(steps[k] - steps[k - 1] == 3);
  CHECK(traced.steps <= 30);
}

TEST_CASE("cancellation and warm starts") {
  GenSpec spec;
  spec.n = 12;
  spec.m = 10;
  const CanonicalProblem cp = canonicalize(generate(spec).problem);
  const Soac c = build_circuit(cp);
  std::atomic<bool> cancel{true};
  IntegrateOptions options;
  options.cancel = &cancel;
  const auto out = integrate(c, cp, DynParams{}, 1, Budget{1000, 0.0}, options);
  CHECK(out.steps == 0);

  const std::vector<double> start(cp.n, 1.0);
  IntegrateOptions warm;
  warm.initial_voltages = &start;
  const auto w = integrate(c, cp, DynParams{}, 1, Budget{0, 0.0}, warm);
  CHECK(w.final_voltages == start);
}

TEST_CASE("state bounds hold after every step") {
  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CanonicalProblem cp = memilp::testing::random_canonical(seed, 12, 14, 0.4, seed % 2 == 0);
    const Soac c = build_circuit(cp);
    DynParams p;
    p.dt = 0.05 + 0.1 * static_cast<double>(seed % 3);
    p.xl_max = 50.0;
    DynState s = init_state(c, seed, p);
    for (int k = 0; k < 2000; ++k) {
      s = step(c, s, p);
      for (double v : s.v) REQUIRE((v >= -1.0 && v <= 1.0));
      for (double x : s.xs) REQUIRE((x >= 0.0 && x <= 1.0));
      for (double x : s.xl) REQUIRE((x >= 1.0 && x <= p.xl_max));
    }
  }
}

// Digital equilibria: rest exactly when every row holds.
TEST_CASE("digital states rest iff feasible") {
  const DynParams p;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const CanonicalProblem cp = memilp::testing::random_canonical(seed, 6, 4, 0.6);
    const Soac c = build_circuit(cp);
    if (c.trivially_infeasible()) continue;
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
      const Assignment a = memilp::testing::bits_of(mask, 6);
      std::vector<double> v(6);
      for (std::size_t j = 0; j < 6; ++j) v[j] = a[j] ? 1.0 : -1.0;
      const auto d = rhs(c, make_state(v, 0.0, 1.0, c.gates().size()), p);
      double biggest = 0.0;
      for (double x : d.dv) biggest = std::max(biggest, std::abs(x));
      for (double x : d.dxs) biggest = std::max(biggest, x);
      for (double x : d.dxl) biggest = std::max(biggest, x);
      if (is_feasible(cp, a)) {
        for (double x : d.dv) CHECK(std::abs(x) <= 1e-12);
        for (double x : d.dxs) CHECK(x <= 0.0);
        for (double x : d.dxl) CHECK(x <= 0.0);
      } else {
        CHECK(biggest > 1e-6);
      }
    }
  }
}
