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

#include "synthqa/datamodel.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "synthqa/error.hpp"

namespace synthqa {
namespace {

constexpr std::int64_t kMsPerDay = 86'400'000;

[[noreturn]] void fail(const std::string& message) { throw Error("datamodel", message); }

bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    value = value * 10 + (s[i] - '0');
  }
  out = value;
  return true;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string_view kind_name(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kNumeric:
      return "numeric";
    case ColumnKind::kDatetime:
      return "datetime";
    case ColumnKind::kText:
      return "text";
  }
  return "categorical";
}

std::optional<ColumnKind> parse_kind(std::string_view name) {
  for (auto kind : {ColumnKind::kCategorical, ColumnKind::kNumeric, ColumnKind::kDatetime,
                    ColumnKind::kText}) {
    if (kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view role_tag(Role role) {
  switch (role) {
    case Role::kTraining:
      return "trn";
    case Role::kHoldout:
      return "hol";
    case Role::kSynthetic:
      return "syn";
  }
  return "trn";
}

std::optional<std::int64_t> parse_iso8601(std::string_view s) {
  using namespace std::chrono;
  int y = 0, mo = 0, d = 0;
  if (!read_digits(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !read_digits(s, 5, 2, mo) ||
      s[7] != '-' || !read_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)},
                            day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  std::int64_t ms = static_cast<std::int64_t>(sys_days{date}.time_since_epoch().count()) * kMsPerDay;
  if (s.size() == 10) return ms;

  std::size_t p = 10;
  if (s[p] != 'T' && s[p] != ' ') return std::nullopt;
  ++p;
  int hh = 0, mm = 0, ss = 0;
  if (!read_digits(s, p, 2, hh) || p + 2 >= s.size() || s[p + 2] != ':' ||
      !read_digits(s, p + 3, 2, mm)) {
    return std::nullopt;
  }
  p += 5;
  int millis = 0;
  if (p < s.size() && s[p] == ':') {
    if (!read_digits(s, p + 1, 2, ss)) return std::nullopt;
    p += 3;
    if (p < s.size() && s[p] == '.') {
      ++p;
      std::size_t digits = 0;
      while (p < s.size() && s[p] >= '0' && s[p] <= '9') {
        if (digits < 3) millis = millis * 10 + (s[p] - '0');
        ++digits;
        ++p;
      }
      if (digits == 0 || digits > 9) return std::nullopt;
      for (std::size_t i = digits; i < 3; ++i) millis *= 10;
    }
  }
  if (p < s.size() && s[p] == 'Z') ++p;
  if (p != s.size()) return std::nullopt;
  if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  return ms + ((hh * 60 + mm) * 60 + ss) * std::int64_t{1000} + millis;
}

std::string format_iso8601(std::int64_t epoch_ms) {
  using namespace std::chrono;
  const std::int64_t days_since = floor_div(epoch_ms, kMsPerDay);
  std::int64_t rem = epoch_ms - days_since * kMsPerDay;
  const year_month_day date{sys_days{days{days_since}}};
  char buffer[40];
  const int y = static_cast<int>(date.year());
  const unsigned mo = static_cast<unsigned>(date.month());
  const unsigned d = static_cast<unsigned>(date.day());
  if (rem == 0) {
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", y, mo, d);
    return buffer;
  }
  const int millis = static_cast<int>(rem % 1000);
  rem /= 1000;
  const int ss = static_cast<int>(rem % 60);
  const int mm = static_cast<int>((rem / 60) % 60);
  const int hh = static_cast<int>(rem / 3600);
  if (millis == 0) {
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02uT%02d:%02d:%02d", y, mo, d, hh, mm, ss);
  } else {
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02uT%02d:%02d:%02d.%03d", y, mo, d, hh, mm,
                  ss, millis);
  }
  return buffer;
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

// ---------------------------------------------------------------------------
// Column

Column::Column(std::string name, NumericValues values)
    : name_(std::move(name)), kind_(ColumnKind::kNumeric), values_(std::move(values)) {}

Column::Column(std::string name, DatetimeValues values)
    : name_(std::move(name)), kind_(ColumnKind::kDatetime), values_(std::move(values)) {}

Column::Column(std::string name, ColumnKind kind, StringValues values)
    : name_(std::move(name)), kind_(kind), values_(std::move(values)) {
  if (kind != ColumnKind::kCategorical && kind != ColumnKind::kText) {
    fail("string values require a categorical or text column ('" + name_ + "')");
  }
}

Column Column::from_cells(std::string name, std::span<const std::string> cells,
                          std::optional<ColumnKind> hint, std::size_t* unparsed) {
  ColumnKind kind = ColumnKind::kCategorical;
  if (hint) {
    kind = *hint;
  } else {
    bool any = false, numeric = true, datetime = true;
    for (const auto& cell : cells) {
      if (cell.empty()) continue;
      any = true;
      if (numeric && !parse_number(cell)) numeric = false;
      if (datetime && !parse_iso8601(cell)) datetime = false;
      if (!numeric && !datetime) break;
    }
    if (any && numeric) {
      kind = ColumnKind::kNumeric;
    } else if (any && datetime) {
      kind = ColumnKind::kDatetime;
    }
  }

  std::size_t bad = 0;
  switch (kind) {
    case ColumnKind::kNumeric: {
      NumericValues values;
      values.reserve(cells.size());
      for (const auto& cell : cells) {
        if (cell.empty()) {
          values.emplace_back();
          continue;
        }
        auto parsed = parse_number(cell);
        if (!parsed) ++bad;
        values.push_back(parsed);
      }
      if (unparsed) *unparsed = bad;
      return Column(std::move(name), std::move(values));
    }
    case ColumnKind::kDatetime: {
      DatetimeValues values;
      values.reserve(cells.size());
      for (const auto& cell : cells) {
        if (cell.empty()) {
          values.emplace_back();
          continue;
        }
        auto parsed = parse_iso8601(cell);
        if (!parsed) ++bad;
        values.push_back(parsed);
      }
      if (unparsed) *unparsed = bad;
      return Column(std::move(name), std::move(values));
    }
    case ColumnKind::kCategorical:
    case ColumnKind::kText: {
      StringValues values;
      values.reserve(cells.size());
      for (const auto& cell : cells) {
        if (cell.empty()) {
          values.emplace_back();
        } else {
          values.emplace_back(cell);
        }
      }
      if (unparsed) *unparsed = 0;
      return Column(std::move(name), kind, std::move(values));
    }
  }
  fail("unknown column kind");
}

std::size_t Column::size() const {
  return std::visit([](const auto& v) { return v.size(); }, values_);
}

bool Column::is_missing(std::size_t row) const {
  return std::visit([row](const auto& v) { return !v[row].has_value(); }, values_);
}

std::optional<double> Column::number(std::size_t row) const {
  if (const auto* numeric = std::get_if<NumericValues>(&values_)) return (*numeric)[row];
  if (const auto* dates = std::get_if<DatetimeValues>(&values_)) {
    const auto& value = (*dates)[row];
    if (!value) return std::nullopt;
    return static_cast<double>(*value);
  }
  return std::nullopt;
}

const std::string* Column::label(std::size_t row) const {
  if (const auto* strings = std::get_if<StringValues>(&values_)) {
    const auto& value = (*strings)[row];
    return value ? &*value : nullptr;
  }
  return nullptr;
}

std::string Column::format(std::size_t row) const {
  if (const auto* numeric = std::get_if<NumericValues>(&values_)) {
    const auto& value = (*numeric)[row];
    return value ? format_number(*value) : std::string{};
  }
  if (const auto* dates = std::get_if<DatetimeValues>(&values_)) {
    const auto& value = (*dates)[row];
    return value ? format_iso8601(*value) : std::string{};
  }
  const auto& value = std::get<StringValues>(values_)[row];
  return value ? *value : std::string{};
}

bool Column::cell_equals(std::size_t row, const Column& other, std::size_t other_row) const {
  if (values_.index() == other.values_.index()) {
    return std::visit(
        [&](const auto& mine) {
          using T = std::decay_t<decltype(mine)>;
          return mine[row] == std::get<T>(other.values_)[other_row];
        },
        values_);
  }
  if (is_missing(row) || other.is_missing(other_row)) {
    return is_missing(row) && other.is_missing(other_row);
  }
  return format(row) == other.format(other_row);
}

Column Column::renamed(std::string name, bool from_context) const {
  Column copy = *this;
  copy.name_ = std::move(name);
  copy.from_context_ = from_context;
  return copy;
}

Column Column::take(std::span<const std::size_t> rows) const {
  Column copy = *this;
  std::visit(
      [&](auto& target) {
        using T = std::decay_t<decltype(target)>;
        const auto& source = std::get<T>(values_);
        T picked;
        picked.reserve(rows.size());
        for (std::size_t r : rows) picked.push_back(source[r]);
        target = std::move(picked);
      },
      copy.values_);
  return copy;
}

Column Column::coerced(ColumnKind kind, std::size_t* unparsed) const {
  if (kind == kind_) {
    if (unparsed) *unparsed = 0;
    return *this;
  }
  std::vector<std::string> cells(size());
  for (std::size_t r = 0; r < cells.size(); ++r) cells[r] = format(r);
  Column result = from_cells(name_, cells, kind, unparsed);
  result.from_context_ = from_context_;
  return result;
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(Role role, std::vector<Column> columns, std::optional<std::string> sequence_key)
    : role_(role), columns_(std::move(columns)), sequence_key_(std::move(sequence_key)) {
  n_rows_ = columns_.empty() ? 0 : columns_.front().size();
  std::unordered_set<std::string> names;
  for (const auto& column : columns_) {
    if (!names.insert(column.name()).second) fail("duplicate column name '" + column.name() + "'");
    if (column.size() != n_rows_) {
      fail("column '" + column.name() + "' has " + std::to_string(column.size()) +
           " values, expected " + std::to_string(n_rows_));
    }
  }
  if (sequence_key_) {
    const Column* key = find(*sequence_key_);
    if (!key) fail("sequence key '" + *sequence_key_ + "' is not a column");
    for (std::size_t r = 0; r < n_rows_; ++r) {
      if (key->is_missing(r)) {
        fail("sequence key '" + *sequence_key_ + "' is missing in row " + std::to_string(r + 1));
      }
    }
  }
}

const Column* Dataset::find(std::string_view name) const {
  for (const auto& column : columns_) {
    if (column.name() == name) return &column;
  }
  return nullptr;
}

const Column& Dataset::column(std::string_view name) const {
  const Column* found = find(name);
  if (!found) fail("no column named '" + std::string(name) + "'");
  return *found;
}

std::vector<std::string> Dataset::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& column : columns_) names.push_back(column.name());
  return names;
}

std::vector<Subject> Dataset::subjects() const {
  if (!sequence_key_) fail("dataset has no sequence key");
  const Column& key = column(*sequence_key_);
  std::vector<Subject> result;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < n_rows_; ++r) {
    std::string text = key.format(r);
    auto [it, inserted] = index.try_emplace(text, result.size());
    if (inserted) result.push_back(Subject{std::move(text), {}});
    result[it->second].rows.push_back(r);
  }
  return result;
}

Dataset Dataset::take_rows(std::span<const std::size_t> rows) const {
  std::vector<Column> picked;
  picked.reserve(columns_.size());
  for (const auto& column : columns_) picked.push_back(column.take(rows));
  return Dataset(role_, std::move(picked), sequence_key_);
}

Dataset Dataset::with_role(Role role) const {
  Dataset copy = *this;
  copy.role_ = role;
  return copy;
}

Dataset Dataset::with_sequence_key(std::optional<std::string> key) const {
  return Dataset(role_, columns_, std::move(key));
}

// ---------------------------------------------------------------------------
// Ingestion

SchemaHints parse_schema_hints(std::string_view text) {
  SchemaHints hints;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t sep = line.find_first_of("=:");
    if (sep == std::string_view::npos) {
      fail("schema hints line " + std::to_string(line_no) + ": expected 'column=kind'");
    }
    const std::string column(trim(line.substr(0, sep)));
    const std::string_view kind_text = trim(line.substr(sep + 1));
    const auto kind = parse_kind(kind_text);
    if (column.empty() || !kind) {
      fail("schema hints line " + std::to_string(line_no) + ": unknown kind '" +
           std::string(kind_text) + "'");
    }
    hints[column] = *kind;
  }
  return hints;
}

SchemaHints read_schema_hints(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read schema hints '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_schema_hints(buffer.str());
}

Dataset dataset_from_table(const csv::Table& table, Role role, const SchemaHints& hints,
                           std::vector<std::string>* warnings) {
  std::unordered_set<std::string> seen;
  for (const auto& name : table.header) {
    if (!seen.insert(name).second) fail("duplicate header name '" + name + "'");
  }
  std::vector<Column> columns;
  columns.reserve(table.header.size());
  std::vector<std::string> cells(table.rows.size());
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) cells[r] = table.rows[r][c];
    const auto hint = hints.find(table.header[c]);
    std::size_t unparsed = 0;
    columns.push_back(Column::from_cells(
        table.header[c], cells,
        hint == hints.end() ? std::nullopt : std::optional<ColumnKind>(hint->second), &unparsed));
    if (unparsed > 0 && warnings) {
      warnings->push_back(std::string(role_tag(role)) + ": " + std::to_string(unparsed) +
                          " value(s) in column '" + table.header[c] + "' do not parse as " +
                          std::string(kind_name(columns.back().kind())) +
                          " and are treated as missing");
    }
  }
  return Dataset(role, std::move(columns));
}

Dataset load_dataset(const std::string& path, Role role, const SchemaHints& hints,
                     std::vector<std::string>* warnings) {
  return dataset_from_table(csv::read_file(path), role, hints, warnings);
}

csv::Table dataset_to_table(const Dataset& dataset) {
  csv::Table table;
  table.header = dataset.column_names();
  table.rows.assign(dataset.n_rows(), std::vector<std::string>(table.header.size()));
  for (std::size_t c = 0; c < dataset.columns().size(); ++c) {
    const Column& column = dataset.columns()[c];
    for (std::size_t r = 0; r < dataset.n_rows(); ++r) table.rows[r][c] = column.format(r);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Joining and alignment

Dataset join_context(const Dataset& target, const Dataset& context, const ContextJoin& join) {
  const Column* primary = context.find(join.ctx_primary_key);
  if (!primary) fail("context has no primary key column '" + join.ctx_primary_key + "'");
  const Column* foreign = target.find(join.tgt_context_key);
  if (!foreign) fail("target has no context key column '" + join.tgt_context_key + "'");

  std::unordered_map<std::string, std::size_t> by_key;
  for (std::size_t r = 0; r < context.n_rows(); ++r) {
    if (primary->is_missing(r)) {
      fail("context primary key '" + join.ctx_primary_key + "' is missing in row " +
           std::to_string(r + 1));
    }
    if (!by_key.emplace(primary->format(r), r).second) {
      fail("duplicate context primary key '" + primary->format(r) + "'");
    }
  }

  std::vector<std::size_t> context_rows(target.n_rows());
  for (std::size_t r = 0; r < target.n_rows(); ++r) {
    const std::string key = foreign->format(r);
    const auto it = foreign->is_missing(r) ? by_key.end() : by_key.find(key);
    if (it == by_key.end()) {
      fail("orphan target row " + std::to_string(r + 1) + ": context key '" + key +
           "' not found in context");
    }
    context_rows[r] = it->second;
  }

  std::vector<Column> columns = target.columns();
  for (const auto& column : context.columns()) {
    if (column.name() == join.ctx_primary_key) continue;
    columns.push_back(
        column.take(context_rows).renamed(std::string(kContextPrefix) + column.name(), true));
  }
  return Dataset(target.role(), std::move(columns), target.sequence_key());
}

ColumnAlignment align_columns(const Dataset& trn, const Dataset& syn, const Dataset* hol) {
  ColumnAlignment alignment;
  for (const auto& column : trn.columns()) {
    const bool in_syn = syn.find(column.name()) != nullptr;
    const bool in_hol = !hol || hol->find(column.name()) != nullptr;
    if (in_syn && in_hol) {
      alignment.columns.push_back({column.name(), column.kind(), column.from_context()});
      continue;
    }
    std::string where = !in_syn ? "syn" : "";
    if (!in_hol) where += where.empty() ? "hol" : " and hol";
    alignment.warnings.push_back("column '" + column.name() + "' is missing from " + where +
                                 " and is excluded");
  }
  auto note_extra = [&](const Dataset& other) {
    for (const auto& column : other.columns()) {
      if (!trn.find(column.name())) {
        alignment.warnings.push_back("column '" + column.name() + "' of " +
                                     std::string(role_tag(other.role())) +
                                     " is not in trn and is excluded");
      }
    }
  };
  note_extra(syn);
  if (hol) note_extra(*hol);
  if (alignment.columns.empty()) fail("training and synthetic data share no columns");
  return alignment;
}

Dataset conform(const Dataset& dataset, const ColumnAlignment& alignment,
                std::vector<std::string>* warnings) {
  std::vector<Column> columns;
  columns.reserve(alignment.columns.size() + 1);
  for (const auto& aligned : alignment.columns) {
    const Column& source = dataset.column(aligned.name);
    std::size_t unparsed = 0;
    Column column = source.coerced(aligned.kind, &unparsed).renamed(aligned.name,
                                                                     aligned.from_context);
    if (source.kind() != aligned.kind && warnings) {
      warnings->push_back(std::string(role_tag(dataset.role())) + ": column '" + aligned.name +
                          "' read as " + std::string(kind_name(aligned.kind)) +
                          " to match trn (" + std::to_string(unparsed) +
                          " value(s) became missing)");
    }
    columns.push_back(std::move(column));
  }
  const auto& key = dataset.sequence_key();
  if (key && std::none_of(columns.begin(), columns.end(),
                          [&](const Column& c) { return c.name() == *key; })) {
    columns.push_back(dataset.column(*key));
  }
  return Dataset(dataset.role(), std::move(columns), key);
}

}  // namespace synthqa
