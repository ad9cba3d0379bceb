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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "synthqa/datamodel.hpp"

namespace synthqa {

using BinIndex = std::int32_t;

// Rows whose value falls outside the retained categories (or that have no bin
// at all) carry this index and are dropped from frequency vectors.
inline constexpr BinIndex kExcludedBin = -1;

inline constexpr std::size_t kDefaultBins = 10;

// Discretization of one column, fit on training data only.
//
// Decile specs have edges.size() + 1 value bins: a value v lands in the first
// bin i with v <= edges[i], or in the last bin when it exceeds every edge.
// Category specs have one value bin per retained label, in rank order. When
// includes_missing_bin is set the missing bin comes last.
struct BinningSpec {
  enum class Kind { kDecileEdges, kTopCategories };

  std::string column;
  Kind kind = Kind::kDecileEdges;
  ColumnKind column_kind = ColumnKind::kNumeric;
  std::vector<double> edges;
  std::vector<std::string> labels;
  bool has_value_bins = true;  // false only for an all-missing numeric column
  bool includes_missing_bin = true;

  std::size_t value_bin_count() const;
  std::size_t bin_count() const;
  BinIndex missing_bin() const;  // kExcludedBin when there is none
  // Human-readable bin labels for charts, e.g. "<= 10.5", "(10.5, 20.5]", "(missing)".
  std::vector<std::string> bin_labels() const;

  bool operator==(const BinningSpec&) const = default;
};

inline constexpr const char* kMissingLabel = "(missing)";

// Interior edges are the i/k quantiles (i = 1..k-1) of the non-missing values
// under midpoint interpolation, with duplicates collapsed and edges at or
// above the maximum dropped.
BinningSpec fit_numeric_bins(std::span<const std::optional<double>> values,
                             std::size_t k = kDefaultBins, std::string column = {});

// Keeps the k most frequent non-missing labels, ties broken lexicographically.
BinningSpec fit_top_categories(std::span<const std::optional<std::string>> values,
                               std::size_t k = kDefaultBins, std::string column = {});

// Fits the spec appropriate for the column kind, optionally on a row subset.
BinningSpec fit_binning(const Column& column, std::size_t k = kDefaultBins,
                        std::optional<std::span<const std::size_t>> rows = std::nullopt);

BinIndex bin_of(const BinningSpec& spec, std::optional<double> value);
BinIndex bin_of(const BinningSpec& spec, const std::string* label);

std::vector<BinIndex> apply_binning(std::span<const std::optional<double>> values,
                                    const BinningSpec& spec);
std::vector<BinIndex> apply_binning(std::span<const std::optional<std::string>> values,
                                    const BinningSpec& spec);
std::vector<BinIndex> apply_binning(const Column& column, const BinningSpec& spec,
                                    std::optional<std::span<const std::size_t>> rows = std::nullopt);

struct FrequencyVector {
  std::string column;
  std::vector<double> proportions;
  std::size_t usable_rows = 0;  // rows that were not excluded
};

// Proportions over the spec's bins after dropping excluded rows. Throws when
// no row is usable.
FrequencyVector frequency_vector(std::span<const BinIndex> bins, const BinningSpec& spec);

nlohmann::json to_json(const BinningSpec& spec);
BinningSpec binning_spec_from_json(const nlohmann::json& json);

}  // namespace synthqa
