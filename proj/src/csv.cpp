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

#include "synthqa/csv.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "synthqa/error.hpp"

namespace synthqa::csv {
namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("datamodel", message); }

// Splits text into records of cells. A record that is a single empty line is
// reported as one empty cell; the caller decides whether that is a row.
std::vector<std::vector<std::string>> split_records(std::string_view text, char sep) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string cell;
  bool in_quotes = false;
  bool cell_was_quoted = false;
  std::size_t line = 1;

  auto end_cell = [&] {
    record.push_back(std::move(cell));
    cell.clear();
    cell_was_quoted = false;
  };
  auto end_record = [&] {
    end_cell();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"' && cell.empty() && !cell_was_quoted) {
      in_quotes = true;
      cell_was_quoted = true;
    } else if (c == sep) {
      end_cell();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
      ++line;
    } else {
      cell.push_back(c);
    }
  }
  if (in_quotes) fail("unterminated quoted field near line " + std::to_string(line));
  if (!cell.empty() || !record.empty() || cell_was_quoted) end_record();
  return records;
}

bool is_blank_record(const std::vector<std::string>& record) {
  return record.size() == 1 && record[0].empty();
}

}  // namespace

Table parse(std::string_view text, char separator) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto records = split_records(text, separator);
  if (records.empty()) fail("input has no header row");

  Table table;
  table.header = std::move(records.front());
  const std::size_t width = table.header.size();
  table.rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& record = records[r];
    // Blank lines only carry meaning (a missing value) in single-column files.
    if (width > 1 && is_blank_record(record)) continue;
    if (record.size() != width) {
      fail("ragged row " + std::to_string(r + 1) + ": expected " + std::to_string(width) +
           " cells, found " + std::to_string(record.size()));
    }
    table.rows.push_back(std::move(record));
  }
  return table;
}

Table read_file(const std::string& path, char separator) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail("error while reading '" + path + "'");
  return parse(buffer.str(), separator);
}

void write(std::ostream& out, const Table& table, char separator) {
  auto write_cell = [&](const std::string& cell) {
    const bool needs_quotes = cell.find_first_of(std::string{separator, '"', '\n', '\r'}) !=
                              std::string::npos;
    if (!needs_quotes) {
      out << cell;
      return;
    }
    out << '"';
    for (char c : cell) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  };
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << separator;
      write_cell(row[i]);
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
}

}  // namespace synthqa::csv
