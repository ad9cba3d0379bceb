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

#include "synthqa/embedding.hpp"

#include <unistd.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "synthqa/error.hpp"
#include "synthqa/parallel.hpp"
#include "synthqa/random.hpp"

namespace synthqa {
namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("embedding", message); }

void append_value(std::string& out, const Column& column, std::size_t row, bool& first) {
  if (!first) out.push_back(kValueSeparator);
  first = false;
  out += column.format(row);
}

// Removes the temporary file on scope exit.
class TempFile {
 public:
  TempFile() {
    std::string pattern = (std::filesystem::temp_directory_path() / "synthqa-XXXXXX").string();
    const int fd = mkstemp(pattern.data());
    if (fd < 0) fail("cannot create a temporary file for the external encoder");
    close(fd);
    path_ = pattern;
  }
  ~TempFile() {
    std::error_code ignored;
    std::filesystem::remove(path_, ignored);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

void parse_vector_line(std::string_view line, std::size_t record, double* out) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while (true) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
      ++pos;
    }
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    if (count == kEmbeddingDims) {
      fail("external encoder returned more than " + std::to_string(kEmbeddingDims) +
           " values for record " + std::to_string(record));
    }
    double value = 0.0;
    const char* first = line.data() + pos;
    const char* last = line.data() + end;
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      fail("external encoder returned a non-numeric or non-finite value for record " +
           std::to_string(record));
    }
    out[count++] = value;
    pos = end;
  }
  if (count != kEmbeddingDims) {
    fail("external encoder returned " + std::to_string(count) + " values for record " +
         std::to_string(record) + ", expected " + std::to_string(kEmbeddingDims));
  }
}

void run_external(std::span<const std::string> strings, const std::string& command,
                  EmbeddingMatrix& matrix) {
  TempFile input;
  {
    std::ofstream out(input.path(), std::ios::binary);
    for (const auto& s : strings) {
      std::string line = s;
      for (char& c : line) {
        if (c == '\n' || c == '\r') c = ' ';
      }
      out << line << '\n';
    }
    if (!out) fail("cannot write the external encoder input");
  }
  const std::string shell = "(" + command + ") < " + shell_quote(input.path());
  FILE* pipe = popen(shell.c_str(), "r");
  if (pipe == nullptr) fail("cannot start external encoder '" + command + "'");

  std::string buffer;
  std::size_t record = 0;
  std::array<char, 65536> chunk;
  bool overflow = false;
  auto take_line = [&](std::string_view line) {
    if (record >= matrix.rows) {
      overflow = true;
      return;
    }
    parse_vector_line(line, record, matrix.row(record));
    ++record;
  };
  try {
    std::size_t got = 0;
    while ((got = std::fread(chunk.data(), 1, chunk.size(), pipe)) > 0) {
      buffer.append(chunk.data(), got);
      std::size_t start = 0;
      for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos; start = nl + 1) {
        take_line(std::string_view(buffer).substr(start, nl - start));
      }
      buffer.erase(0, start);
    }
    if (!buffer.empty()) take_line(buffer);
  } catch (...) {
    pclose(pipe);
    throw;
  }
  const int status = pclose(pipe);
  if (status != 0) {
    fail("external encoder '" + command + "' failed with status " + std::to_string(status));
  }
  if (overflow || record != matrix.rows) {
    fail("external encoder returned " + std::string(overflow ? "more" : "fewer") +
         " lines than the " + std::to_string(matrix.rows) + " records sent");
  }
}

}  // namespace

std::string truncate_code_points(std::string_view text, std::size_t limit) {
  std::size_t points = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto byte = static_cast<unsigned char>(text[i]);
    if ((byte & 0xC0) != 0x80) {
      if (points == limit) return std::string(text.substr(0, i));
      ++points;
    }
  }
  return std::string(text);
}

std::string serialize_record(const Dataset& dataset, std::span<const std::size_t> rows,
                             std::span<const std::string> columns,
                             std::size_t truncation_limit) {
  std::vector<const Column*> context, target;
  for (const auto& name : columns) {
    const Column& column = dataset.column(name);
    (column.from_context() ? context : target).push_back(&column);
  }
  std::string out;
  bool first = true;
  if (!rows.empty()) {
    for (const Column* column : context) append_value(out, *column, rows.front(), first);
  }
  for (std::size_t row : rows) {
    for (const Column* column : target) append_value(out, *column, row, first);
  }
  return truncate_code_points(out, truncation_limit);
}

std::vector<std::string> serialize_dataset(const Dataset& dataset,
                                           std::span<const std::string> columns, bool sequential,
                                           std::size_t truncation_limit) {
  std::vector<std::string> out;
  if (sequential) {
    const auto subjects = dataset.subjects();
    out.resize(subjects.size());
    parallel_for(subjects.size(), 64, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        out[i] = serialize_record(dataset, subjects[i].rows, columns, truncation_limit);
      }
    });
  } else {
    out.resize(dataset.n_rows());
    parallel_for(out.size(), 256, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t row[] = {i};
        out[i] = serialize_record(dataset, row, columns, truncation_limit);
      }
    });
  }
  return out;
}

EncoderSpec EncoderSpec::parse(std::string_view text) {
  constexpr std::string_view kExternalPrefix = "external:";
  if (text == "hashing") return {};
  if (text.starts_with(kExternalPrefix)) {
    EncoderSpec spec{Kind::kExternal, std::string(text.substr(kExternalPrefix.size()))};
    if (spec.command.empty()) fail("external encoder needs a command");
    return spec;
  }
  fail("unknown encoder '" + std::string(text) + "'; expected hashing or external:CMD");
}

std::string EncoderSpec::to_string() const {
  return kind == Kind::kHashing ? std::string("hashing") : "external:" + command;
}

bool hash_trigrams(std::string_view text, std::span<double, kEmbeddingDims> out) {
  std::fill(out.begin(), out.end(), 0.0);
  std::string padded;
  padded.reserve(text.size() + 2);
  padded.push_back('\x02');
  padded.append(text);
  padded.push_back('\x03');
  if (padded.size() < 3) return false;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::uint64_t h = random::mix64(random::fnv1a64(std::string_view(padded).substr(i, 3)));
    const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
    out[h % kEmbeddingDims] += sign;
  }
  return true;
}

bool normalize_or_basis(std::span<double, kEmbeddingDims> v) {
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) fail("encoder produced a non-finite value");
    sum += x * x;
  }
  if (sum == 0.0) {
    std::fill(v.begin(), v.end(), 0.0);
    v[0] = 1.0;
    return false;
  }
  const double norm = std::sqrt(sum);
  for (double& x : v) x /= norm;
  return true;
}

EmbeddingMatrix embed(std::span<const std::string> strings, const EncoderSpec& spec,
                      Role provenance) {
  if (strings.empty()) fail("nothing to embed");
  EmbeddingMatrix matrix;
  matrix.provenance = provenance;
  matrix.rows = strings.size();
  matrix.data.assign(matrix.rows * kEmbeddingDims, 0.0);

  if (spec.kind == EncoderSpec::Kind::kExternal) {
    run_external(strings, spec.command, matrix);
  } else {
    parallel_for(matrix.rows, 256, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        hash_trigrams(strings[i], std::span<double, kEmbeddingDims>(matrix.row(i), kEmbeddingDims));
      }
    });
  }
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    if (!normalize_or_basis(std::span<double, kEmbeddingDims>(matrix.row(i), kEmbeddingDims))) {
      matrix.flagged_rows.push_back(i);
    }
  }
  return matrix;
}

}  // namespace synthqa
