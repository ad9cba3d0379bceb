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

#include "synthqa/binning.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "synthqa/error.hpp"

namespace synthqa {
namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("binning", message); }

std::string format_edge(const BinningSpec& spec, double edge) {
  if (spec.column_kind == ColumnKind::kDatetime) {
    return format_iso8601(static_cast<std::int64_t>(edge));
  }
  return format_number(edge);
}

template <typename T>
std::vector<T> pick(std::span<const T> values, std::optional<std::span<const std::size_t>> rows) {
  if (!rows) return std::vector<T>(values.begin(), values.end());
  std::vector<T> picked;
  picked.reserve(rows->size());
  for (std::size_t r : *rows) picked.push_back(values[r]);
  return picked;
}

}  // namespace

std::size_t BinningSpec::value_bin_count() const {
  if (kind == Kind::kTopCategories) return labels.size();
  return has_value_bins ? edges.size() + 1 : 0;
}

std::size_t BinningSpec::bin_count() const {
  return value_bin_count() + (includes_missing_bin ? 1 : 0);
}

BinIndex BinningSpec::missing_bin() const {
  return includes_missing_bin ? static_cast<BinIndex>(value_bin_count()) : kExcludedBin;
}

std::vector<std::string> BinningSpec::bin_labels() const {
  std::vector<std::string> result;
  if (kind == Kind::kTopCategories) {
    result = labels;
  } else if (has_value_bins) {
    if (edges.empty()) {
      result.push_back("all values");
    } else {
      result.push_back("<= " + format_edge(*this, edges.front()));
      for (std::size_t i = 1; i < edges.size(); ++i) {
        result.push_back("(" + format_edge(*this, edges[i - 1]) + ", " +
                         format_edge(*this, edges[i]) + "]");
      }
      result.push_back("> " + format_edge(*this, edges.back()));
    }
  }
  if (includes_missing_bin) result.emplace_back(kMissingLabel);
  return result;
}

BinningSpec fit_numeric_bins(std::span<const std::optional<double>> values, std::size_t k,
                             std::string column) {
  if (k < 1) fail("bin count must be at least 1");
  BinningSpec spec;
  spec.column = std::move(column);
  spec.kind = BinningSpec::Kind::kDecileEdges;

  std::vector<double> sorted;
  sorted.reserve(values.size());
  for (const auto& v : values) {
    if (v) sorted.push_back(*v);
  }
  if (sorted.empty()) {
    spec.has_value_bins = false;
    return spec;
  }
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double max_value = sorted.back();

  for (std::size_t i = 1; i < k; ++i) {
    // Quantile position (n - 1) * i / k, kept in integers so it is exact.
    const std::size_t scaled = (n - 1) * i;
    const std::size_t lo = scaled / k;
    const std::size_t hi = lo + (scaled % k != 0 ? 1 : 0);
    const double edge = sorted[lo] + (sorted[hi] - sorted[lo]) / 2.0;
    if (edge >= max_value) break;
    if (spec.edges.empty() || edge > spec.edges.back()) spec.edges.push_back(edge);
  }
  return spec;
}

BinningSpec fit_top_categories(std::span<const std::optional<std::string>> values, std::size_t k,
                               std::string column) {
  if (k < 1) fail("category count must be at least 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& v : values) {
    if (v) ++counts[*v];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // counts is label-ordered, so a stable sort on count keeps the lexicographic tie-break.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > k) ranked.resize(k);

  BinningSpec spec;
  spec.column = std::move(column);
  spec.kind = BinningSpec::Kind::kTopCategories;
  spec.column_kind = ColumnKind::kCategorical;
  spec.labels.reserve(ranked.size());
  for (auto& [label, count] : ranked) spec.labels.push_back(label);
  return spec;
}

BinningSpec fit_binning(const Column& column, std::size_t k,
                        std::optional<std::span<const std::size_t>> rows) {
  const std::size_t n = rows ? rows->size() : column.size();
  auto row_at = [&](std::size_t i) { return rows ? (*rows)[i] : i; };
  BinningSpec spec;
  if (column.kind() == ColumnKind::kNumeric || column.kind() == ColumnKind::kDatetime) {
    std::vector<std::optional<double>> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = column.number(row_at(i));
    spec = fit_numeric_bins(values, k, column.name());
  } else {
    std::vector<std::optional<std::string>> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (const std::string* label = column.label(row_at(i))) values[i] = *label;
    }
    spec = fit_top_categories(values, k, column.name());
  }
  spec.column_kind = column.kind();
  return spec;
}

BinIndex bin_of(const BinningSpec& spec, std::optional<double> value) {
  if (!value) return spec.missing_bin();
  if (spec.kind != BinningSpec::Kind::kDecileEdges) fail("numeric value for category spec");
  if (!spec.has_value_bins) return kExcludedBin;
  const auto it = std::lower_bound(spec.edges.begin(), spec.edges.end(), *value);
  return static_cast<BinIndex>(it - spec.edges.begin());
}

BinIndex bin_of(const BinningSpec& spec, const std::string* label) {
  if (!label) return spec.missing_bin();
  if (spec.kind != BinningSpec::Kind::kTopCategories) fail("label for decile spec");
  for (std::size_t i = 0; i < spec.labels.size(); ++i) {
    if (spec.labels[i] == *label) return static_cast<BinIndex>(i);
  }
  return kExcludedBin;
}

std::vector<BinIndex> apply_binning(std::span<const std::optional<double>> values,
                                    const BinningSpec& spec) {
  std::vector<BinIndex> bins(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) bins[i] = bin_of(spec, values[i]);
  return bins;
}

std::vector<BinIndex> apply_binning(std::span<const std::optional<std::string>> values,
                                    const BinningSpec& spec) {
  if (spec.kind != BinningSpec::Kind::kTopCategories) fail("labels for decile spec");
  std::unordered_map<std::string_view, BinIndex> lookup;
  for (std::size_t i = 0; i < spec.labels.size(); ++i) {
    lookup.emplace(spec.labels[i], static_cast<BinIndex>(i));
  }
  std::vector<BinIndex> bins(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) {
      bins[i] = spec.missing_bin();
      continue;
    }
    const auto it = lookup.find(*values[i]);
    bins[i] = it == lookup.end() ? kExcludedBin : it->second;
  }
  return bins;
}

std::vector<BinIndex> apply_binning(const Column& column, const BinningSpec& spec,
                                    std::optional<std::span<const std::size_t>> rows) {
  const std::size_t n = rows ? rows->size() : column.size();
  auto row_at = [&](std::size_t i) { return rows ? (*rows)[i] : i; };
  std::vector<BinIndex> bins(n);
  if (spec.kind == BinningSpec::Kind::kDecileEdges) {
    if (column.kind() != ColumnKind::kNumeric && column.kind() != ColumnKind::kDatetime) {
      fail("column '" + column.name() + "' is not numeric but its spec has decile edges");
    }
    for (std::size_t i = 0; i < n; ++i) bins[i] = bin_of(spec, column.number(row_at(i)));
    return bins;
  }
  if (column.kind() != ColumnKind::kCategorical && column.kind() != ColumnKind::kText) {
    fail("column '" + column.name() + "' is not categorical but its spec has categories");
  }
  std::unordered_map<std::string_view, BinIndex> lookup;
  for (std::size_t i = 0; i < spec.labels.size(); ++i) {
    lookup.emplace(spec.labels[i], static_cast<BinIndex>(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string* label = column.label(row_at(i));
    if (!label) {
      bins[i] = spec.missing_bin();
      continue;
    }
    const auto it = lookup.find(*label);
    bins[i] = it == lookup.end() ? kExcludedBin : it->second;
  }
  return bins;
}

FrequencyVector frequency_vector(std::span<const BinIndex> bins, const BinningSpec& spec) {
  const std::size_t width = spec.bin_count();
  std::vector<std::size_t> counts(width, 0);
  std::size_t usable = 0;
  for (BinIndex b : bins) {
    if (b == kExcludedBin) continue;
    if (b < 0 || static_cast<std::size_t>(b) >= width) {
      fail("bin index " + std::to_string(b) + " out of range for column '" + spec.column + "'");
    }
    ++counts[static_cast<std::size_t>(b)];
    ++usable;
  }
  if (usable == 0) fail("column '" + spec.column + "' has no rows in any retained bin");
  FrequencyVector result;
  result.column = spec.column;
  result.usable_rows = usable;
  result.proportions.resize(width);
  for (std::size_t i = 0; i < width; ++i) {
    result.proportions[i] = static_cast<double>(counts[i]) / static_cast<double>(usable);
  }
  return result;
}

nlohmann::json to_json(const BinningSpec& spec) {
  nlohmann::json json;
  json["column"] = spec.column;
  json["column_kind"] = std::string(kind_name(spec.column_kind));
  json["includes_missing_bin"] = spec.includes_missing_bin;
  if (spec.kind == BinningSpec::Kind::kDecileEdges) {
    json["kind"] = "decile_edges";
    json["edges"] = spec.edges;
    json["has_value_bins"] = spec.has_value_bins;
  } else {
    json["kind"] = "top_categories";
    json["labels"] = spec.labels;
  }
  return json;
}

BinningSpec binning_spec_from_json(const nlohmann::json& json) {
  BinningSpec spec;
  spec.column = json.at("column").get<std::string>();
  const auto kind = parse_kind(json.at("column_kind").get<std::string>());
  if (!kind) fail("unknown column kind in spec for '" + spec.column + "'");
  spec.column_kind = *kind;
  spec.includes_missing_bin = json.at("includes_missing_bin").get<bool>();
  const auto spec_kind = json.at("kind").get<std::string>();
  if (spec_kind == "decile_edges") {
    spec.kind = BinningSpec::Kind::kDecileEdges;
    spec.edges = json.at("edges").get<std::vector<double>>();
    spec.has_value_bins = json.value("has_value_bins", true);
  } else if (spec_kind == "top_categories") {
    spec.kind = BinningSpec::Kind::kTopCategories;
    spec.labels = json.at("labels").get<std::vector<std::string>>();
  } else {
    fail("unknown spec kind '" + spec_kind + "'");
  }
  return spec;
}

}  // namespace synthqa
