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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "memilp/circuit.hpp"
#include "memilp/ingest.hpp"
#include "memilp/oracle.hpp"
#include "memilp/solver.hpp"

namespace memilp::cli {

namespace {

namespace fs = std::filesystem;

// Input problems surface as this with a ready-to-print diagnostic.
struct InputError {
  std::string message;
};

std::string format_double(double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, result.ptr);
}

std::optional<FileFormat> parse_format(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "mps") return FileFormat::kMps;
  if (name == "json") return FileFormat::kJson;
  throw InputError{"unknown format '" + name + "' (expected mps or json)"};
}

std::string describe(const std::string& path, const ParseError& e) {
  if (const auto* s = dynamic_cast<const SyntaxError*>(&e)) {
    if (s->line() > 0) return path + ":" + std::to_string(s->line()) + ": " + s->reason();
    return path + ": " + s->reason();
  }
  if (const auto* u = dynamic_cast<const Unsupported*>(&e)) {
    if (u->line() > 0) return path + ":" + std::to_string(u->line()) + ": " + e.what();
    return path + ": " + e.what();
  }
  return path + ": " + e.what();
}

IlpProblem load(const std::string& path, const std::string& format) {
  try {
    IlpProblem problem = load_problem(path, parse_format(format));
    if (const auto defects = validate(problem); !defects.empty()) {
      throw InputError{path + ": " + defects.front().entity + ": " + defects.front().message};
    }
    return problem;
  } catch (const ParseError& e) {
    throw InputError{describe(path, e)};
  }
}

CanonicalProblem canonical(const std::string& path, const IlpProblem& problem) {
  try {
    return canonicalize(problem);
  } catch (const ExpansionTooLarge& e) {
    throw InputError{path + ": " + e.what()};
  } catch (const InvalidProblem& e) {
    throw InputError{path + ": " + e.what()};
  }
}

// Options shared by solve and bench.
struct SolveFlags {
  double time_limit = 0.0;
  std::uint64_t max_steps = 100000;
  std::uint64_t total_steps = 0;
  std::size_t restarts = 8;
  std::uint64_t seed = 1;
  std::vector<std::string> params;
  std::size_t threads = 0;
  double granularity = 0.0;
  bool warm_start = false;

  void attach(CLI::App* app) {
    app->add_option("--time-limit", time_limit, "Total wall-clock budget in seconds (0 = none)");
    app->add_option("--max-steps", max_steps, "Step budget per trajectory");
    app->add_option("--total-steps", total_steps, "Step budget over the whole solve (0 = none)");
    app->add_option("--restarts", restarts, "Trajectories per objective bound");
    app->add_option("--seed", seed, "Seed of the first trajectory");
    app->add_option("--param", params, "Dynamics parameter as name=value (repeatable)");
    app->add_option("--threads", threads, "Trajectory parallelism (0 = all cores)");
    app->add_option("--granularity", granularity, "Objective bound step (0 = automatic)");
    app->add_flag("--warm-start", warm_start, "Reuse the previous winner's voltages");
  }

  SolverConfig config() const {
    SolverConfig config;
    for (const std::string& entry : params) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos ||
          !set_param(config.params, entry.substr(0, eq), entry.substr(eq + 1))) {
        throw InputError{"invalid --param '" + entry + "'"};
      }
    }
    config.wall_time_total = time_limit;
    config.max_steps_per_run = max_steps;
    config.max_total_steps = total_steps;
    config.restarts = restarts;
    config.seed = seed;
    config.threads = threads;
    if (granularity > 0) config.sweep.granularity = granularity;
    config.sweep.warm_start = warm_start;
    if (auto problem = check_config(config)) throw InputError{"invalid configuration: " + *problem};
    return config;
  }
};

std::string assignment_line(const IlpProblem& problem, const OriginalAssignment& values) {
  std::string line;
  for (const Variable& v : problem.variables) {
    if (!line.empty()) line += ' ';
    line += v.name + "=" + std::to_string(values.at(v.name));
  }
  return line;
}

class TraceWriter {
 public:
  TraceWriter(const std::string& path, bool full, std::size_t n) : out_(path), full_(full) {
    if (!out_) throw InputError{"cannot open trace file '" + path + "'"};
    out_ << "step,t,max_violation,violated_rows";
    if (full_) {
      for (std::size_t j = 0; j < n; ++j) out_ << ",v" << j;
    }
    out_ << "\n";
  }

  TraceSink sink() {
    return [this](const TraceSample& s) {
      out_ << s.step << "," << format_double(s.t) << "," << format_double(s.max_violation) << ","
           << s.violated_rows;
      if (full_) {
        for (double v : s.v) out_ << "," << format_double(v);
      }
      out_ << "\n";
    };
  }

 private:
  std::ofstream out_;
  bool full_;
};

int cmd_solve(const std::string& path, const std::string& format, const SolveFlags& flags,
              const std::string& trace_path, bool trace_full, bool as_json,
              const std::string& solution_out, std::ostream& out) {
  const IlpProblem problem = load(path, format);
  const CanonicalProblem cp = canonical(path, problem);
  SolverConfig config = flags.config();

  std::optional<TraceWriter> writer;
  TraceSink sink;
  if (!trace_path.empty()) {
    writer.emplace(trace_path, trace_full, cp.n);
    sink = writer->sink();
    config.trace = &sink;
  }

  const SolveReport report = solve_optimize(cp, config);

  if (report.best && !solution_out.empty()) {
    std::ofstream sol(solution_out);
    if (!sol) throw InputError{"cannot open '" + solution_out + "'"};
    sol << write_solution_json(problem, report.best->assignment, report.best->objective);
  }

  if (as_json) {
    out << report_to_json(report);
  } else {
    out << "problem " << (problem.name.empty() ? path : problem.name) << ": "
        << problem.variables.size() << " variables, " << problem.rows.size() << " rows -> "
        << cp.n << " binaries, " << cp.rows.size() << " canonical rows, nnz " << cp.nnz() << "\n";
    out << "params:";
    for (const auto& [name, value] : param_list(report.params)) {
      out << " " << name << "=" << format_double(value);
    }
    out << "\n";
    out << "incumbents:\n";
    for (const Incumbent& inc : report.history) {
      char stamp[32];
      std::snprintf(stamp, sizeof(stamp), "%10.3f", inc.found_at);
      out << "  [" << stamp << "s] objective " << format_double(inc.objective) << "  (seed "
          << inc.seed << ", steps " << inc.steps << ", bound "
          << (std::isfinite(inc.bound) ? format_double(inc.bound) : std::string("none")) << ")\n";
    }
    out << "verdict: " << to_string(report.verdict) << "\n";
    if (report.best) {
      out << "best objective: " << format_double(report.best->objective) << "\n";
      out << "assignment: " << assignment_line(problem, report.best->assignment) << "\n";
    }
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f", report.budget.wall_seconds);
    out << "budget: steps " << report.budget.steps << ", trajectories "
        << report.budget.trajectories << ", rounds " << report.budget.rounds << ", wall " << wall
        << "s\n";
  }

  if (report.best) return kOk;
  if (report.verdict == Verdict::kTriviallyInfeasible) return kInfeasible;
  return kNoSolution;
}

int cmd_check(const std::string& path, const std::string& solution_path, const std::string& format,
              std::ostream& out) {
  const IlpProblem problem = load(path, format);
  Solution solution;
  try {
    solution = parse_solution_json(read_file(solution_path));
  } catch (const ParseError& e) {
    throw InputError{describe(solution_path, e)};
  }
  const OriginalCheck check = check_original(problem, solution.assignment);
  if (!check.complete) {
    throw InputError{solution_path + ": assignment missing variable '" + check.missing.front() +
                     "'"};
  }
  if (!check.unknown.empty()) {
    throw InputError{solution_path + ": assignment names unknown variable '" +
                     check.unknown.front() + "'"};
  }
  bool ok = true;
  for (const std::string& name : check.out_of_bounds) {
    out << "out of bounds: " << name << "=" << solution.assignment.at(name) << "\n";
    ok = false;
  }
  for (const auto& [row, amount] : check.violated_rows) {
    out << "violated row " << row << " by " << format_double(amount) << "\n";
    ok = false;
  }
  if (solution.objective && *solution.objective != check.objective) {
    out << "objective mismatch: claimed " << format_double(*solution.objective) << ", actual "
        << format_double(check.objective) << "\n";
    ok = false;
  }
  if (!ok) return kInfeasible;
  out << "feasible, objective " << format_double(check.objective) << "\n";
  return kOk;
}

struct GenFlags {
  std::string kind;
  GenSpec spec;
  std::string out_path;
  std::string witness_path;
};

int cmd_gen(const GenFlags& flags, std::ostream& out) {
  const auto kind = gen_kind_from_string(flags.kind);
  if (!kind) {
    throw InputError{"unknown instance kind '" + flags.kind +
                     "' (expected planted-random, set-cover or knapsack)"};
  }
  GenSpec spec = flags.spec;
  spec.kind = *kind;
  GeneratedInstance instance;
  try {
    instance = generate(spec);
  } catch (const std::invalid_argument& e) {
    throw InputError{std::string("invalid generator spec: ") + e.what()};
  }
  const std::string text = write_json(instance.problem);
  if (flags.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(flags.out_path, std::ios::binary);
    if (!file) throw InputError{"cannot open '" + flags.out_path + "'"};
    file << text;
  }
  if (!flags.witness_path.empty()) {
    if (!instance.planted) throw InputError{"only planted-random instances carry a witness"};
    std::ofstream file(flags.witness_path, std::ios::binary);
    if (!file) throw InputError{"cannot open '" + flags.witness_path + "'"};
    const OriginalCheck check = check_original(instance.problem, *instance.planted);
    file << write_solution_json(instance.problem, *instance.planted, check.objective);
  }
  return kOk;
}

int cmd_oracle(const std::string& path, const std::string& format, const std::string& method,
               bool as_json, std::ostream& out) {
  const IlpProblem problem = load(path, format);
  const CanonicalProblem cp = canonical(path, problem);
  OracleResult result;
  try {
    if (method == "enumerate") {
      result = enumerate_optimum(cp);
    } else if (method == "bnb") {
      result = branch_and_bound(cp);
    } else {
      throw InputError{"unknown oracle method '" + method + "' (expected bnb or enumerate)"};
    }
  } catch (const TooLarge& e) {
    throw InputError{path + ": " + e.what()};
  }
  if (as_json) {
    nlohmann::ordered_json doc;
    doc["feasible"] = result.feasible;
    if (result.feasible) {
      const OriginalAssignment values = decode(cp.var_map, result.witness);
      doc["optimum"] = to_original_objective(cp, result.optimum);
      nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
      for (const Variable& v : problem.variables) assignment[v.name] = values.at(v.name);
      doc["assignment"] = std::move(assignment);
    }
    doc["nodes"] = result.nodes;
    out << doc.dump(2) << "\n";
  } else if (result.feasible) {
    out << "optimum " << format_double(to_original_objective(cp, result.optimum)) << "\n";
    out << "assignment: " << assignment_line(problem, decode(cp.var_map, result.witness)) << "\n";
  } else {
    out << "infeasible\n";
  }
  return result.feasible ? kOk : kInfeasible;
}

int cmd_bench(const std::string& dir, const SolveFlags& flags, bool with_oracle,
              std::ostream& out) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw InputError{"'" + dir + "' is not a directory"};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && format_from_path(entry.path().string())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  const SolverConfig config = flags.config();

  out << kBenchHeader << "\n";
  for (const fs::path& file : files) {
    const std::string name = file.filename().string();
    IlpProblem problem;
    CanonicalProblem cp;
    try {
      problem = load(file.string(), "");
      cp = canonical(file.string(), problem);
    } catch (const InputError&) {
      out << name << ",,,,input-error,,,,\n";
      continue;
    }
    const SolveReport report = solve_optimize(cp, config);
    std::string status = "budget-exhausted";
    if (report.best) {
      status = "solved";
    } else if (report.verdict == Verdict::kTriviallyInfeasible) {
      status = "trivially-infeasible";
    }
    std::string oracle_opt;
    if (with_oracle && cp.n <= kEnumerateMaxVars) {
      const OracleResult result = branch_and_bound(cp);
      oracle_opt = result.feasible ? format_double(to_original_objective(cp, result.optimum))
                                   : std::string("infeasible");
    }
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f", report.budget.wall_seconds);
    out << name << "," << cp.n << "," << cp.rows.size() << "," << cp.nnz() << "," << status << ","
        << (report.best ? format_double(report.best->objective) : std::string()) << ","
        << oracle_opt << "," << wall << "," << report.budget.steps << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memcomputing-style 0-1 ILP solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "memilp 0.1.0");

  // solve
  auto* solve = app.add_subcommand("solve", "Optimize a problem with the circuit dynamics");
  std::string solve_file;
  std::string solve_format;
  std::string trace_path;
  bool trace_full = false;
  bool as_json = false;
  std::string solution_out;
  SolveFlags solve_flags;
  solve->add_option("file", solve_file, "Problem file (.mps or .json)")->required();
  solve->add_option("--format", solve_format, "Input format: mps or json");
  solve_flags.attach(solve);
  solve->add_option("--trace", trace_path, "Write a CSV trace of every trajectory");
  solve->add_flag("--trace-full", trace_full, "Include all voltages in the trace");
  solve->add_flag("--json", as_json, "Print the solve report as JSON");
  solve->add_option("--solution-out", solution_out, "Write the best solution as JSON");

  // check
  auto* check = app.add_subcommand("check", "Verify a solution exactly");
  std::string check_file;
  std::string check_solution;
  std::string check_format;
  check->add_option("file", check_file, "Problem file")->required();
  check->add_option("solution", check_solution, "Solution JSON (or a solve --json report)")
      ->required();
  check->add_option("--format", check_format, "Input format: mps or json");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a test instance as JSON");
  GenFlags gen_flags;
  gen->add_option("kind", gen_flags.kind, "planted-random, set-cover or knapsack")->required();
  gen->add_option("--n", gen_flags.spec.n, "Variable count");
  gen->add_option("--m", gen_flags.spec.m, "Row count");
  gen->add_option("--density", gen_flags.spec.density, "Fraction of nonzeros per row");
  gen->add_option("--coeff-min", gen_flags.spec.coeff_min, "Smallest coefficient");
  gen->add_option("--coeff-max", gen_flags.spec.coeff_max, "Largest coefficient");
  gen->add_option("--seed", gen_flags.spec.seed, "Generator seed");
  gen->add_option("--out", gen_flags.out_path, "Output file (default stdout)");
  gen->add_option("--witness", gen_flags.witness_path, "Write the planted solution here");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Solve exactly by branch-and-bound or enumeration");
  std::string oracle_file;
  std::string oracle_format;
  std::string oracle_method = "bnb";
  bool oracle_json = false;
  oracle->add_option("file", oracle_file, "Problem file")->required();
  oracle->add_option("--format", oracle_format, "Input format: mps or json");
  oracle->add_option("--method", oracle_method, "bnb or enumerate");
  oracle->add_flag("--json", oracle_json, "Print the result as JSON");

  // bench
  auto* bench = app.add_subcommand("bench", "Solve every instance in a directory, print CSV");
  std::string bench_dir;
  bool with_oracle = false;
  SolveFlags bench_flags;
  bench->add_option("dir", bench_dir, "Directory of .json/.mps instances")->required();
  bench->add_flag("--with-oracle", with_oracle, "Fill oracle_opt for small instances");
  bench_flags.attach(bench);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "memilp 0.1.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "error: " << message << "\n";
    return kInputError;
  }

  try {
    if (*solve) {
      return cmd_solve(solve_file, solve_format, solve_flags, trace_path, trace_full, as_json,
                       solution_out, out);
    }
    if (*check) return cmd_check(check_file, check_solution, check_format, out);
    if (*gen) return cmd_gen(gen_flags, out);
    if (*oracle) return cmd_oracle(oracle_file, oracle_format, oracle_method, oracle_json, out);
    if (*bench) return cmd_bench(bench_dir, bench_flags, with_oracle, out);
  } catch (const InputError& e) {
    err << "error: " << e.message << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace memilp::cli
