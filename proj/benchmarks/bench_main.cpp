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


#include <benchmark/benchmark.h>

#include "memilp/circuit.hpp"
#include "memilp/dynamics.hpp"
#include "memilp/ingest.hpp"
#include "memilp/oracle.hpp"

using namespace memilp;

namespace {

// Roughly `nnz` nonzeros, 50 per row, plus a contradictory pair on x0 so
// trajectories never stop early.
CanonicalProblem unsolvable(std::size_t nnz) {
  GenSpec spec;
  spec.n = nnz / 10;
  spec.m = nnz / 50;
  spec.density = 50.0 / static_cast<double>(spec.n);
  IlpProblem p = generate(spec).problem;
  const std::string x0 = p.variables.front().name;
  p.rows.push_back({"pin_low", {{x0, 1.0}}, Relation::kLessEqual, 0.0});
  p.rows.push_back({"pin_high", {{x0, 1.0}}, Relation::kGreaterEqual, 1.0});
  return canonicalize(p);
}

void BM_Integrate(benchmark::State& state) {
  const CanonicalProblem cp = unsolvable(static_cast<std::size_t>(state.range(0)));
  const Soac circuit = build_circuit(cp);
  Budget budget;
  budget.max_steps = 100;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(circuit, cp, DynParams{}, seed++, budget));
  }
  state.counters["nnz"] = static_cast<double>(circuit.nnz());
  state.counters["steps/s"] =
      benchmark::Counter(100.0 * static_cast<double>(state.iterations()), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Integrate)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_Rhs(benchmark::State& state) {
  const CanonicalProblem cp = unsolvable(static_cast<std::size_t>(state.range(0)));
  const Soac circuit = build_circuit(cp);
  const DynParams params;
  const DynState s = init_state(circuit, 1, params);
  for (auto _ : state) benchmark::DoNotOptimize(rhs(circuit, s, params));
}
BENCHMARK(BM_Rhs)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_ParseJson(benchmark::State& state) {
  GenSpec spec;
  spec.n = static_cast<std::size_t>(state.range(0));
  spec.m = spec.n / 2;
  const std::string text = write_json(generate(spec).problem);
  for (auto _ : state) benchmark::DoNotOptimize(parse_json(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseJson)->Arg(100)->Arg(1000);

void BM_BranchAndBound(benchmark::State& state) {
  GenSpec spec;
  spec.kind = GenKind::kKnapsack;
  spec.n = static_cast<std::size_t>(state.range(0));
  spec.m = 3;
  const CanonicalProblem cp = canonicalize(generate(spec).problem);
  for (auto _ : state) benchmark::DoNotOptimize(branch_and_bound(cp));
}
BENCHMARK(BM_BranchAndBound)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
