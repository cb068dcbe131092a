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

// Free-format MPS reader restricted to pure-integer programs with finite,
// non-negative integer bounds.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "memilp/ingest.hpp"

namespace memilp {

namespace {

enum class Section { kNone, kName, kObjSense, kRows, kColumns, kRhs, kBounds, kEnd };

enum class RowType { kObjective, kFree, kLe, kGe, kEq };

struct RowInfo {
  std::string name;
  RowType type;
  double rhs = 0.0;
};

struct ColumnInfo {
  std::string name;
  bool integer = false;
  bool binary = false;
  double lower = 0.0;
  std::optional<double> upper;
  bool lower_set = false;
  std::size_t bound_line = 0;
  // row index -> summed coefficient; objective uses index kObjectiveIndex.
  std::vector<std::pair<std::size_t, double>> entries;
};

constexpr std::size_t kObjectiveIndex = static_cast<std::size_t>(-1);
constexpr double kBoundLimit = 4.0e18;

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

double parse_number(std::string_view token, std::size_t line) {
  std::string_view body = token;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size() || body.empty()) {
    throw SyntaxError(line, "invalid number '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw SyntaxError(line, "non-finite number '" + std::string(token) + "'");
  }
  return value;
}

class MpsReader {
 public:
  IlpProblem read(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size() && section_ != Section::kEnd) {
      const std::size_t nl = text.find('\n', pos);
      const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
      std::string_view line = text.substr(pos, end - pos);
      ++line_no;
      pos = end + 1;
      handle_line(line, line_no);
      if (nl == std::string_view::npos) break;
    }
    if (section_ != Section::kEnd) {
      throw SyntaxError(line_no + 1, "missing ENDATA");
    }
    return assemble();
  }

 private:
  void handle_line(std::string_view line, std::size_t line_no) {
    const auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().front() == '*') return;
    const bool header = line.front() != ' ' && line.front() != '\t';
    if (header) {
      start_section(tokens, line_no);
      return;
    }
    switch (section_) {
      case Section::kNone:
        throw SyntaxError(line_no, "data line outside of any section");
      case Section::kName:
        throw SyntaxError(line_no, "unexpected data after NAME");
      case Section::kObjSense:
        read_objsense(tokens, line_no);
        break;
      case Section::kRows:
        read_row(tokens, line_no);
        break;
      case Section::kColumns:
        read_column(tokens, line_no);
        break;
      case Section::kRhs:
        read_rhs(tokens, line_no);
        break;
      case Section::kBounds:
        read_bound(tokens, line_no);
        break;
      case Section::kEnd:
        break;
    }
  }

  void start_section(const std::vector<std::string_view>& tokens, std::size_t line_no) {
    const std::string key = upper(tokens.front());
    if (key == "NAME") {
      if (seen_rows_) throw SyntaxError(line_no, "NAME after ROWS");
      if (tokens.size() > 1) name_ = std::string(tokens[1]);
      section_ = Section::kName;
    } else if (key == "OBJSENSE") {
      section_ = Section::kObjSense;
      if (tokens.size() > 1) {
        set_sense(tokens[1], line_no);
        sense_given_ = true;
      }
    } else if (key == "ROWS") {
      if (seen_rows_) throw SyntaxError(line_no, "duplicate ROWS section");
      seen_rows_ = true;
      section_ = Section::kRows;
    } else if (key == "COLUMNS") {
      if (!seen_rows_) throw SyntaxError(line_no, "COLUMNS before ROWS");
      if (seen_columns_) throw SyntaxError(line_no, "duplicate COLUMNS section");
      seen_columns_ = true;
      section_ = Section::kColumns;
    } else if (key == "RHS") {
      if (!seen_columns_) throw SyntaxError(line_no, "RHS before COLUMNS");
      section_ = Section::kRhs;
    } else if (key == "BOUNDS") {
      if (!seen_columns_) throw SyntaxError(line_no, "BOUNDS before COLUMNS");
      section_ = Section::kBounds;
    } else if (key == "ENDATA") {
      section_ = Section::kEnd;
    } else if (key == "RANGES" || key == "SOS" || key == "OBJNAME" || key == "QUADOBJ" ||
               key == "QSECTION" || key == "QMATRIX" || key == "QCMATRIX" ||
               key == "INDICATORS" || key == "CSECTION") {
      throw Unsupported(key, line_no);
    } else {
      throw SyntaxError(line_no, "unknown section '" + std::string(tokens.front()) + "'");
    }
  }

  void set_sense(std::string_view token, std::size_t line_no) {
    const std::string s = upper(token);
    if (s == "MAX" || s == "MAXIMIZE") {
      sense_ = Sense::kMaximize;
    } else if (s == "MIN" || s == "MINIMIZE") {
      sense_ = Sense::kMinimize;
    } else {
      throw SyntaxError(line_no, "invalid OBJSENSE '" + std::string(token) + "'");
    }
  }

  void read_objsense(const std::vector<std::string_view>& tokens, std::size_t line_no) {
    if (sense_given_ || tokens.size() != 1) {
      throw SyntaxError(line_no, "unexpected data in OBJSENSE");
    }
    set_sense(tokens[0], line_no);
    sense_given_ = true;
  }

  void read_row(const std::vector<std::string_view>& tokens, std::size_t line_no) {
    if (tokens.size() != 2) throw SyntaxError(line_no, "ROWS entry needs type and name");
    const std::string type = upper(tokens[0]);
    RowType rt;
    if (type == "N") {
      rt = objective_row_ ? RowType::kFree : RowType::kObjective;
    } else if (type == "L") {
      rt = RowType::kLe;
    } else if (type == "G") {
      rt = RowType::kGe;
    } else if (type == "E") {
      rt = RowType::kEq;
    } else {
      throw SyntaxError(line_no, "invalid row type '" + std::string(tokens[0]) + "'");
    }
    std::string name(tokens[1]);
    if (row_index_.contains(name)) {
      throw SyntaxError(line_no, "duplicate row '" + name + "'");
    }
    if (rt == RowType::kObjective) objective_row_ = name;
    row_index_.emplace(name, rows_.size());
    rows_.push_back({std::move(name), rt});
  }

  // Resolves a row name; returns nullopt for free N rows, whose data is dropped.
  std::optional<std::size_t> row_ref(std::string_view name, std::size_t line_no) const {
    const auto it = row_index_.find(std::string(name));
    if (it == row_index_.end()) {
      throw SyntaxError(line_no, "unknown row '" + std::string(name) + "'");
    }
    const RowInfo& info = rows_[it->second];
    if (info.type == RowType::kFree) return std::nullopt;
    if (info.type == RowType::kObjective) return kObjectiveIndex;
    return it->second;
  }

  void read_column(const std::vector<std::string_view>& tokens, std::size_t line_no) {
    if (tokens.size() == 3 && upper(tokens[1]) == "'MARKER'") {
      const std::string marker = upper(tokens[2]);
      if (marker == "'INTORG'") {
        in_integer_block_ = true;
      } else if (marker == "'INTEND'") {
        in_integer_block_ = false;
      } else {
        throw SyntaxError(line_no, "unknown marker " + std::string(tokens[2]));
      }
      return;
    }
    if (tokens.size() != 3 && tokens.size() != 5) {
      throw SyntaxError(line_no, "COLUMNS entry needs column, row, value [, row, value]");
    }
    ColumnInfo& column = column_for(tokens[0]);
    column.integer = column.integer || in_integer_block_;
    for (std::size_t k = 1; k + 1 < tokens.size(); k += 2) {
      const auto row = row_ref(tokens[k], line_no);
      const double value = parse_number(tokens[k + 1], line_no);
      if (!row) continue;
      auto it = std::find_if(column.entries.begin(), column.entries.end(),
                             [&](const auto& e) { return e.first == *row; });
      if (it == column.entries.end()) {
        column.entries.emplace_back(*row, value);
      } else {
        it->second += value;
      }
    }
  }

  ColumnInfo& column_for(std::string_view name) {
    std::string key(name);
    auto it = column_index_.find(key);
    if (it == column_index_.end()) {
      it = column_index_.emplace(key, columns_.size()).first;
      columns_.push_back({});
      columns_.back().name = std::move(key);
    }
    return columns_[it->second];
  }

  void read_rhs(const std::vector<std::string_view>& tokens, std::size_t line_no) {
    // Optional leading set name makes the token count odd.
    std::size_t first = 0;
    if (tokens.size() == 3 || tokens.size() == 5) {
      first = 1;
    } else if (tokens.size() != 2 && tokens.size() != 4) {
      throw SyntaxError(line_no, "RHS entry needs [set,] row, value [, row, value]");
    }
    for (std::size_t k = first; k + 1 < tokens.size(); k += 2) {
      const auto row = row_ref(tokens[k], line_no);
      const double value = parse_number(tokens[k + 1], line_no);
      if (!row) continue;
      if (*row == kObjectiveIndex) {
        objective_offset_ = -value;
      } else {
        rows_[*row].rhs = value;
      }
    }
  }

  void read_bound(const std::vector<std::string_view>& tokens, std::size_t line_no) {
    if (tokens.empty()) return;
    const std::string type = upper(tokens[0]);
    const bool needs_value = type == "UP" || type == "LO" || type == "FX" || type == "LI" ||
                             type == "UI" || type == "SC";
    const bool valueless = type == "BV" || type == "MI" || type == "PL" || type == "FR";
    if (!needs_value && !valueless) {
      throw SyntaxError(line_no, "invalid bound type '" + std::string(tokens[0]) + "'");
    }
    std::string_view column_name;
    std::optional<double> value;
    if (needs_value) {
      if (tokens.size() == 3) {
        column_name = tokens[1];
      } else if (tokens.size() == 4) {
        column_name = tokens[2];
      } else {
        throw SyntaxError(line_no, type + " bound needs [set,] column, value");
      }
      value = parse_number(tokens.back(), line_no);
    } else {
      if (tokens.size() == 2) {
        column_name = tokens[1];
      } else if (tokens.size() == 3 || tokens.size() == 4) {
        column_name = tokens[2];
      } else {
        throw SyntaxError(line_no, type + " bound needs [set,] column");
      }
    }
    const auto it = column_index_.find(std::string(column_name));
    if (it == column_index_.end()) {
      throw SyntaxError(line_no, "unknown column '" + std::string(column_name) + "'");
    }
    ColumnInfo& column = columns_[it->second];
    column.bound_line = line_no;
    const std::string& name = column.name;
    auto reject_negative_lower = [&] {
      throw Unsupported("negative lower bound on integer variable '" + name + "'", line_no);
    };
    if (value && std::abs(*value) > kBoundLimit) {
      throw Unsupported("bound magnitude on '" + name + "'", line_no);
    }

    if (type == "UP" || type == "UI") {
      if (type == "UI") column.integer = true;
      if (*value < 0.0 && !column.lower_set) reject_negative_lower();
      column.upper = *value;
      column.binary = false;
    } else if (type == "LO" || type == "LI") {
      if (type == "LI") column.integer = true;
      if (*value < 0.0) reject_negative_lower();
      column.lower = *value;
      column.lower_set = true;
      column.binary = false;
    } else if (type == "FX") {
      if (*value < 0.0) reject_negative_lower();
      column.lower = *value;
      column.upper = *value;
      column.lower_set = true;
      column.binary = false;
    } else if (type == "BV") {
      column.integer = true;
      column.binary = true;
      column.lower = 0.0;
      column.upper = 1.0;
      column.lower_set = true;
    } else if (type == "MI" || type == "FR") {
      reject_negative_lower();
    } else if (type == "PL") {
      column.upper.reset();
      column.binary = false;
    } else {
      throw Unsupported("semi-continuous bound on '" + name + "'", line_no);
    }
  }

  IlpProblem assemble() const {
    IlpProblem problem;
    problem.name = name_;
    problem.sense = sense_;
    problem.objective.offset = objective_offset_ == 0.0 ? 0.0 : objective_offset_;

    for (const ColumnInfo& column : columns_) {
      if (!column.integer) {
        throw Unsupported("continuous variable '" + column.name + "'");
      }
      if (!column.upper) {
        throw Unsupported("unbounded integer variable '" + column.name + "'", column.bound_line);
      }
      Variable var;
      var.name = column.name;
      const double lo = std::ceil(column.lower);
      const double up = std::floor(*column.upper);
      if (lo > up) {
        throw SyntaxError(column.bound_line, "empty domain for '" + column.name + "'");
      }
      if (up - lo > static_cast<double>(kMaxIntegerRange)) {
        throw Unsupported("integer range of '" + column.name + "' exceeds 2^30",
                          column.bound_line);
      }
      if (column.binary || (lo == 0.0 && up == 1.0)) {
        var.kind = VarKind::kBinary;
      } else {
        var.kind = VarKind::kInteger;
        var.lower = static_cast<std::int64_t>(lo);
        var.upper = static_cast<std::int64_t>(up);
      }
      problem.variables.push_back(std::move(var));
    }

    std::vector<std::size_t> row_slot(rows_.size(), kObjectiveIndex);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const RowInfo& info = rows_[i];
      Row row;
      row.name = info.name;
      row.rhs = info.rhs;
      switch (info.type) {
        case RowType::kLe: row.relation = Relation::kLessEqual; break;
        case RowType::kGe: row.relation = Relation::kGreaterEqual; break;
        case RowType::kEq: row.relation = Relation::kEqual; break;
        default: continue;
      }
      row_slot[i] = problem.rows.size();
      problem.rows.push_back(std::move(row));
    }

    for (const ColumnInfo& column : columns_) {
      for (const auto& [row, value] : column.entries) {
        if (value == 0.0) continue;
        if (row == kObjectiveIndex) {
          problem.objective.coefficients[column.name] = value;
        } else {
          problem.rows[row_slot[row]].coefficients[column.name] = value;
        }
      }
    }
    return problem;
  }

  Section section_ = Section::kNone;
  std::string name_;
  Sense sense_ = Sense::kMinimize;
  bool sense_given_ = false;
  bool seen_rows_ = false;
  bool seen_columns_ = false;
  bool in_integer_block_ = false;
  std::optional<std::string> objective_row_;
  double objective_offset_ = 0.0;
  std::vector<RowInfo> rows_;
  std::unordered_map<std::string, std::size_t> row_index_;
  std::vector<ColumnInfo> columns_;
  std::unordered_map<std::string, std::size_t> column_index_;
};

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

IlpProblem parse_mps(std::string_view text) { return MpsReader{}.read(text); }

std::string write_mps(const IlpProblem& problem) {
  // Only write what parse_mps reads back.
  for (const Variable& var : problem.variables) {
    if (var.lower_bound() < 0) throw Unsupported("negative lower bound on '" + var.name + "'");
  }
  std::string objective_name = "OBJ";
  auto taken = [&](const std::string& name) {
    return std::any_of(problem.rows.begin(), problem.rows.end(),
                       [&](const Row& r) { return r.name == name; });
  };
  while (taken(objective_name)) objective_name += "_";

  std::ostringstream out;
  out << "NAME " << problem.name << "\n";
  if (problem.sense == Sense::kMaximize) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  " << objective_name << "\n";
  for (const Row& row : problem.rows) {
    const char* type = row.relation == Relation::kLessEqual      ? "L"
                       : row.relation == Relation::kGreaterEqual ? "G"
                                                                 : "E";
    out << " " << type << "  " << row.name << "\n";
  }
  out << "COLUMNS\n    MARKER 'MARKER' 'INTORG'\n";
  for (const Variable& var : problem.variables) {
    bool any = false;
    if (const auto it = problem.objective.coefficients.find(var.name);
        it != problem.objective.coefficients.end()) {
      out << "    " << var.name << " " << objective_name << " " << format_number(it->second)
          << "\n";
      any = true;
    }
    for (const Row& row : problem.rows) {
      if (const auto it = row.coefficients.find(var.name); it != row.coefficients.end()) {
        out << "    " << var.name << " " << row.name << " " << format_number(it->second) << "\n";
        any = true;
      }
    }
    if (!any) out << "    " << var.name << " " << objective_name << " 0\n";
  }
  out << "    MARKER 'MARKER' 'INTEND'\n";
  out << "RHS\n";
  if (problem.objective.offset != 0.0) {
    out << "    RHS " << objective_name << " " << format_number(-problem.objective.offset)
        << "\n";
  }
  for (const Row& row : problem.rows) {
    if (row.rhs != 0.0) out << "    RHS " << row.name << " " << format_number(row.rhs) << "\n";
  }
  out << "BOUNDS\n";
  for (const Variable& var : problem.variables) {
    if (var.kind == VarKind::kBinary) {
      out << " BV BND " << var.name << "\n";
    } else if (var.lower == var.upper) {
      out << " FX BND " << var.name << " " << var.lower << "\n";
    } else {
      if (var.lower != 0) out << " LO BND " << var.name << " " << var.lower << "\n";
      out << " UP BND " << var.name << " " << var.upper << "\n";
    }
  }
  out << "ENDATA\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SyntaxError(0, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::optional<FileFormat> format_from_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    if (path.size() < suffix.size()) return false;
    return upper(path.substr(path.size() - suffix.size())) == upper(suffix);
  };
  if (ends_with(".mps")) return FileFormat::kMps;
  if (ends_with(".json")) return FileFormat::kJson;
  return std::nullopt;
}

IlpProblem load_problem(const std::string& path, std::optional<FileFormat> format) {
  if (!format) format = format_from_path(path);
  if (!format) throw SyntaxError(0, "cannot infer format of '" + path + "' (use .mps or .json)");
  const std::string text = read_file(path);
  return *format == FileFormat::kMps ? parse_mps(text) : parse_json(text);
}

}  // namespace memilp
