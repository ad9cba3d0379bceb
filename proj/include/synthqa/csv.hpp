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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace synthqa::csv {

// A parsed delimiter-separated file: header plus rows of raw cells. Quoting
// follows RFC 4180 (double quotes, "" escapes, embedded separators and line
// breaks). Every row has exactly header.size() cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Throws synthqa::Error("datamodel", ...) on ragged rows, unterminated quotes
// or an empty input.
Table parse(std::string_view text, char separator = ',');

Table read_file(const std::string& path, char separator = ',');

// Quotes cells only when needed, "\n" line endings.
void write(std::ostream& out, const Table& table, char separator = ',');

}  // namespace synthqa::csv
