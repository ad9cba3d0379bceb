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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synthqa/datamodel.hpp"

namespace synthqa {

inline constexpr std::size_t kEmbeddingDims = 384;
inline constexpr std::size_t kDefaultTruncation = 2048;
inline constexpr char kValueSeparator = ';';

// Cuts text to at most `limit` Unicode code points without splitting a UTF-8
// sequence.
std::string truncate_code_points(std::string_view text, std::size_t limit);

// Joins the canonical text of `columns` for the given rows with ';'. One row
// gives "v1;v2;...;vD". Several rows (one subject's events in order) give the
// context columns once, taken from the first row, followed by the target
// columns of every event. Context columns always lead. Missing values are
// empty tokens.
std::string serialize_record(const Dataset& dataset, std::span<const std::size_t> rows,
                             std::span<const std::string> columns,
                             std::size_t truncation_limit = kDefaultTruncation);

// One string per row for flat data, one per subject (first-appearance order)
// for sequential data.
std::vector<std::string> serialize_dataset(const Dataset& dataset,
                                           std::span<const std::string> columns, bool sequential,
                                           std::size_t truncation_limit = kDefaultTruncation);

// Row-major n x 384 matrix of unit-norm record embeddings.
struct EmbeddingMatrix {
  Role provenance = Role::kTraining;
  std::size_t rows = 0;
  std::vector<double> data;
  // Rows whose encoder output was the zero vector and were replaced by e0.
  std::vector<std::size_t> flagged_rows;

  static constexpr std::size_t dims = kEmbeddingDims;
  const double* row(std::size_t i) const { return data.data() + i * dims; }
  double* row(std::size_t i) { return data.data() + i * dims; }
};

struct EncoderSpec {
  enum class Kind { kHashing, kExternal };
  Kind kind = Kind::kHashing;
  std::string command;  // shell command for kExternal

  // "hashing" or "external:CMD".
  static EncoderSpec parse(std::string_view text);
  std::string to_string() const;
  bool operator==(const EncoderSpec&) const = default;
};

// Signed feature hashing of the byte 3-grams of "\x02" + text + "\x03" into
// 384 buckets, unnormalized. Returns false when no 3-gram exists.
bool hash_trigrams(std::string_view text, std::span<double, kEmbeddingDims> out);

// Scales a vector to unit L2 norm; a zero vector becomes e0 and false is
// returned. Throws on non-finite entries.
bool normalize_or_basis(std::span<double, kEmbeddingDims> v);

// Encodes every string, order preserved. The external encoder receives one
// record per line (line breaks inside a record become spaces) on its standard
// input and must print one line of 384 numbers per record.
EmbeddingMatrix embed(std::span<const std::string> strings, const EncoderSpec& spec,
                      Role provenance = Role::kTraining);

}  // namespace synthqa
