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
#include <cmath>
#include <initializer_list>

#include "json.hpp"
#include "memilp/ingest.hpp"

namespace memilp {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError(line_of_offset(text, e.byte), "invalid JSON");
  }
}

void require_keys(const json& object, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw SchemaError(path + "." + item.key(), "unknown field");
  }
}

const json& field(const json& object, const std::string& path, const char* key) {
  const auto it = object.find(key);
  if (it == object.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw SchemaError(path, "expected string");
  return value.get<std::string>();
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw SchemaError(path, "expected number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw SchemaError(path, "expected finite number");
  return x;
}

std::int64_t as_integer(const json& value, const std::string& path) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned() &&
        value.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      throw SchemaError(path, "integer out of range");
    }
    return value.get<std::int64_t>();
  }
  if (value.is_number_float()) {
    const double x = value.get<double>();
    if (std::isfinite(x) && std::trunc(x) == x && std::abs(x) < 9.0e18) {
      return static_cast<std::int64_t>(x);
    }
  }
  throw SchemaError(path, "expected integer");
}

Coefficients as_coefficients(const json& value, const std::string& path) {
  if (!value.is_object()) throw SchemaError(path, "expected object of coefficients");
  Coefficients out;
  for (const auto& item : value.items()) {
    out[item.key()] = as_number(item.value(), path + "." + item.key());
  }
  return out;
}

Relation as_relation(const json& value, const std::string& path) {
  const std::string s = as_string(value, path);
  if (s == "<=") return Relation::kLessEqual;
  if (s == ">=") return Relation::kGreaterEqual;
  if (s == "=" || s == "==") return Relation::kEqual;
  throw SchemaError(path, "relation must be one of <=, >=, =");
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::kLessEqual: return "<=";
    case Relation::kGreaterEqual: return ">=";
    case Relation::kEqual: return "=";
  }
  return "<=";
}

ordered_json coefficients_json(const Coefficients& coefs) {
  ordered_json out = ordered_json::object();
  for (const auto& [name, value] : coefs) out[name] = value;
  return out;
}

}  // namespace

IlpProblem parse_json(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw SchemaError("$", "expected object");
  require_keys(doc, "$", {"name", "sense", "variables", "objective", "rows"});

  IlpProblem problem;
  if (doc.contains("name")) problem.name = as_string(doc["name"], "name");
  if (doc.contains("sense")) {
    const std::string sense = as_string(doc["sense"], "sense");
    if (sense == "min") {
      problem.sense = Sense::kMinimize;
    } else if (sense == "max") {
      problem.sense = Sense::kMaximize;
    } else {
      throw SchemaError("sense", "expected \"min\" or \"max\"");
    }
  }

  const json& variables = field(doc, "$", "variables");
  if (!variables.is_array()) throw SchemaError("variables", "expected array");
  for (std::size_t k = 0; k < variables.size(); ++k) {
    const std::string path = "variables[" + std::to_string(k) + "]";
    const json& v = variables[k];
    if (!v.is_object()) throw SchemaError(path, "expected object");
    require_keys(v, path, {"name", "type", "lower", "upper"});
    Variable var;
    var.name = as_string(field(v, path, "name"), path + ".name");
    const std::string type = as_string(field(v, path, "type"), path + ".type");
    if (type == "binary") {
      if (v.contains("lower") || v.contains("upper")) {
        throw SchemaError(path, "binary variables take no bounds");
      }
      var.kind = VarKind::kBinary;
    } else if (type == "integer") {
      var.kind = VarKind::kInteger;
      var.lower = as_integer(field(v, path, "lower"), path + ".lower");
      var.upper = as_integer(field(v, path, "upper"), path + ".upper");
    } else {
      throw SchemaError(path + ".type", "expected \"binary\" or \"integer\"");
    }
    problem.variables.push_back(std::move(var));
  }

  if (doc.contains("objective")) {
    const json& obj = doc["objective"];
    if (!obj.is_object()) throw SchemaError("objective", "expected object");
    require_keys(obj, "objective", {"offset", "coefficients"});
    if (obj.contains("offset")) {
      problem.objective.offset = as_number(obj["offset"], "objective.offset");
    }
    if (obj.contains("coefficients")) {
      problem.objective.coefficients =
          as_coefficients(obj["coefficients"], "objective.coefficients");
    }
  }

  const json& rows = field(doc, "$", "rows");
  if (!rows.is_array()) throw SchemaError("rows", "expected array");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string path = "rows[" + std::to_string(k) + "]";
    const json& r = rows[k];
    if (!r.is_object()) throw SchemaError(path, "expected object");
    require_keys(r, path, {"name", "relation", "rhs", "coefficients"});
    Row row;
    if (r.contains("name")) row.name = as_string(r["name"], path + ".name");
    row.relation = as_relation(field(r, path, "relation"), path + ".relation");
    row.rhs = as_number(field(r, path, "rhs"), path + ".rhs");
    row.coefficients = as_coefficients(field(r, path, "coefficients"), path + ".coefficients");
    problem.rows.push_back(std::move(row));
  }
  return problem;
}

std::string write_json(const IlpProblem& problem) {
  ordered_json doc;
  doc["name"] = problem.name;
  doc["sense"] = problem.sense == Sense::kMaximize ? "max" : "min";
  ordered_json variables = ordered_json::array();
  for (const Variable& var : problem.variables) {
    ordered_json v;
    v["name"] = var.name;
    if (var.kind == VarKind::kBinary) {
      v["type"] = "binary";
    } else {
      v["type"] = "integer";
      v["lower"] = var.lower;
      v["upper"] = var.upper;
    }
    variables.push_back(std::move(v));
  }
  doc["variables"] = std::move(variables);
  ordered_json objective;
  objective["offset"] = problem.objective.offset;
  objective["coefficients"] = coefficients_json(problem.objective.coefficients);
  doc["objective"] = std::move(objective);
  ordered_json rows = ordered_json::array();
  for (const Row& row : problem.rows) {
    ordered_json r;
    r["name"] = row.name;
    r["relation"] = relation_text(row.relation);
    r["rhs"] = row.rhs;
    r["coefficients"] = coefficients_json(row.coefficients);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

Solution parse_solution_json(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw SchemaError("$", "expected object");
  // A solve report is accepted too; its best incumbent is the solution.
  if (!doc.contains("assignment") && doc.contains("best")) {
    const json& best = doc["best"];
    if (!best.is_object()) throw SchemaError("best", "report holds no solution");
    return parse_solution_json(best.dump());
  }
  Solution solution;
  const json& assignment = field(doc, "$", "assignment");
  if (!assignment.is_object()) throw SchemaError("assignment", "expected object");
  for (const auto& item : assignment.items()) {
    solution.assignment[item.key()] = as_integer(item.value(), "assignment." + item.key());
  }
  if (doc.contains("objective") && !doc["objective"].is_null()) {
    solution.objective = as_number(doc["objective"], "objective");
  }
  return solution;
}

std::string write_solution_json(const IlpProblem& problem, const OriginalAssignment& assignment,
                                double objective) {
  ordered_json doc;
  ordered_json values = ordered_json::object();
  for (const Variable& var : problem.variables) {
    if (const auto it = assignment.find(var.name); it != assignment.end()) {
      values[var.name] = it->second;
    }
  }
  doc["assignment"] = std::move(values);
  doc["objective"] = objective;
  return doc.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

}  // namespace memilp
