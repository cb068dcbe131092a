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

#ifndef MEMILP_INGEST_HPP_
#define MEMILP_INGEST_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "memilp/model.hpp"

namespace memilp {

/// Base of every structured input error raised by the readers below.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input. `line` is 1-based for MPS and 0 when unknown.
class SyntaxError : public ParseError {
 public:
  SyntaxError(std::size_t line, const std::string& reason)
      : ParseError(line ? "line " + std::to_string(line) + ": " + reason : reason),
        line_(line),
        reason_(reason) {}
  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

/// Well-formed input using a feature outside the pure-integer subset.
class Unsupported : public ParseError {
 public:
  explicit Unsupported(const std::string& feature, std::size_t line = 0)
      : ParseError("unsupported: " + feature), feature_(feature), line_(line) {}
  const std::string& feature() const { return feature_; }
  std::size_t line() const { return line_; }

 private:
  std::string feature_;
  std::size_t line_;
};

/// JSON that parses but does not match the problem/solution schema.
class SchemaError : public ParseError {
 public:
  SchemaError(const std::string& path, const std::string& reason)
      : ParseError("schema error at " + path + ": " + reason), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// ---------------------------------------------------------------------------
// MPS (free format, pure-integer subset)
// ---------------------------------------------------------------------------

IlpProblem parse_mps(std::string_view text);
std::string write_mps(const IlpProblem& problem);

// ---------------------------------------------------------------------------
// Native JSON
// ---------------------------------------------------------------------------

IlpProblem parse_json(std::string_view text);
std::string write_json(const IlpProblem& problem);

struct Solution {
  OriginalAssignment assignment;
  std::optional<double> objective;
};

Solution parse_solution_json(std::string_view text);
/// Variables are emitted in the problem's declaration order.
std::string write_solution_json(const IlpProblem& problem, const OriginalAssignment& assignment,
                                double objective);

enum class FileFormat { kMps, kJson };

/// Chooses by extension (.mps / .json); nullopt when unknown.
std::optional<FileFormat> format_from_path(std::string_view path);
/// Reads and parses a problem file; I/O failures raise SyntaxError(0, ...).
IlpProblem load_problem(const std::string& path, std::optional<FileFormat> format = std::nullopt);
std::string read_file(const std::string& path);

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

enum class GenKind { kPlantedRandom, kSetCover, kKnapsack };

struct GenSpec {
  GenKind kind = GenKind::kPlantedRandom;
  std::size_t n = 8;
  std::size_t m = 6;
  double density = 0.5;
  std::int64_t coeff_min = -5;
  std::int64_t coeff_max = 5;
  std::uint64_t seed = 1;
};

struct GeneratedInstance {
  IlpProblem problem;
  std::optional<OriginalAssignment> planted;
};

/// Throws std::invalid_argument when the spec violates its invariants.
GeneratedInstance generate(const GenSpec& spec);

std::string to_string(GenKind kind);
std::optional<GenKind> gen_kind_from_string(std::string_view name);

}  // namespace memilp

#endif  // MEMILP_INGEST_HPP_
