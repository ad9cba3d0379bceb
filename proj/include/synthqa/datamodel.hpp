// Copyright 2026 The synthqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "synthqa/csv.hpp"

namespace synthqa {

enum class ColumnKind { kCategorical, kNumeric, kDatetime, kText };

std::string_view kind_name(ColumnKind kind);
std::optional<ColumnKind> parse_kind(std::string_view name);

// Which side of the comparison a dataset plays: training, holdout or synthetic.
enum class Role { kTraining, kHoldout, kSynthetic };

std::string_view role_tag(Role role);  // "trn", "hol", "syn"

using NumericValues = std::vector<std::optional<double>>;
using DatetimeValues = std::vector<std::optional<std::int64_t>>;  // epoch milliseconds, UTC
using StringValues = std::vector<std::optional<std::string>>;

// Parses the accepted ISO-8601 forms: YYYY-MM-DD and YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z].
std::optional<std::int64_t> parse_iso8601(std::string_view text);
// Date-only form at midnight, otherwise YYYY-MM-DDTHH:MM:SS with .mmm when needed.
std::string format_iso8601(std::int64_t epoch_ms);

// Accepts finite decimal numbers only (no inf/nan, no surrounding blanks).
std::optional<double> parse_number(std::string_view text);
// Shortest decimal string that round-trips to the same double.
std::string format_number(double value);

class Column {
 public:
  Column(std::string name, NumericValues values);
  Column(std::string name, DatetimeValues values);
  // kind must be kCategorical or kText.
  Column(std::string name, ColumnKind kind, StringValues values);

  // Infers the kind from raw cells: numeric if every non-missing cell parses
  // as a number, datetime if every one parses as ISO-8601, else categorical.
  // An empty cell is missing. A hint forces the kind; cells that do not parse
  // under a forced numeric/datetime kind become missing and are counted in
  // *unparsed.
  static Column from_cells(std::string name, std::span<const std::string> cells,
                           std::optional<ColumnKind> hint = std::nullopt,
                           std::size_t* unparsed = nullptr);

  const std::string& name() const { return name_; }
  ColumnKind kind() const { return kind_; }
  bool from_context() const { return from_context_; }
  std::size_t size() const;

  bool is_missing(std::size_t row) const;
  // Numeric value, or epoch milliseconds for datetimes; nullopt when missing or
  // when the column holds strings.
  std::optional<double> number(std::size_t row) const;
  // String value for categorical/text columns; nullptr when missing or numeric.
  const std::string* label(std::size_t row) const;
  // Canonical text of a cell; empty for missing.
  std::string format(std::size_t row) const;

  bool cell_equals(std::size_t row, const Column& other, std::size_t other_row) const;

  Column renamed(std::string name, bool from_context) const;
  Column take(std::span<const std::size_t> rows) const;
  // Re-reads the column under another kind via its canonical text.
  Column coerced(ColumnKind kind, std::size_t* unparsed = nullptr) const;

 private:
  std::string name_;
  ColumnKind kind_;
  bool from_context_ = false;
  std::variant<NumericValues, DatetimeValues, StringValues> values_;
};

// One subject of a sequential dataset: its key and its rows in file order.
struct Subject {
  std::string key;
  std::vector<std::size_t> rows;
};

// Immutable typed columnar table. Columns have unique names and equal length;
// the sequence key, when set, names an existing column without missing values.
class Dataset {
 public:
  Dataset(Role role, std::vector<Column> columns,
          std::optional<std::string> sequence_key = std::nullopt);

  Role role() const { return role_; }
  std::size_t n_rows() const { return n_rows_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::optional<std::string>& sequence_key() const { return sequence_key_; }

  const Column* find(std::string_view name) const;
  const Column& column(std::string_view name) const;  // throws if absent
  std::vector<std::string> column_names() const;

  // Subjects in order of first appearance. Requires a sequence key.
  std::vector<Subject> subjects() const;

  Dataset take_rows(std::span<const std::size_t> rows) const;
  Dataset with_role(Role role) const;
  Dataset with_sequence_key(std::optional<std::string> key) const;

 private:
  Role role_;
  std::vector<Column> columns_;
  std::optional<std::string> sequence_key_;
  std::size_t n_rows_ = 0;
};

using SchemaHints = std::map<std::string, ColumnKind>;

// Lines of "column=kind" (or "column: kind"); blank lines and '#' comments
// are skipped. kind is one of categorical, numeric, datetime, text.
SchemaHints parse_schema_hints(std::string_view text);
SchemaHints read_schema_hints(const std::string& path);

Dataset dataset_from_table(const csv::Table& table, Role role, const SchemaHints& hints = {},
                           std::vector<std::string>* warnings = nullptr);

Dataset load_dataset(const std::string& path, Role role, const SchemaHints& hints = {},
                     std::vector<std::string>* warnings = nullptr);

csv::Table dataset_to_table(const Dataset& dataset);

struct ContextJoin {
  std::string ctx_primary_key;
  std::string tgt_context_key;
};

inline constexpr std::string_view kContextPrefix = "ctx.";

// Broadcasts each context row onto its target rows. Context columns other than
// the primary key are appended with the "ctx." prefix and flagged as context.
// Row count and order of the target are preserved.
Dataset join_context(const Dataset& target, const Dataset& context, const ContextJoin& join);

struct AlignedColumn {
  std::string name;
  ColumnKind kind;
  bool from_context = false;
};

struct ColumnAlignment {
  std::vector<AlignedColumn> columns;  // training order and training kinds
  std::vector<std::string> warnings;
};

ColumnAlignment align_columns(const Dataset& trn, const Dataset& syn,
                              const Dataset* hol = nullptr);

// Restricts a dataset to the aligned columns (in aligned order, keeping the
// sequence key column if set) and coerces kinds that disagree with training.
Dataset conform(const Dataset& dataset, const ColumnAlignment& alignment,
                std::vector<std::string>* warnings = nullptr);

}  // namespace synthqa
