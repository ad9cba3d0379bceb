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

// Brute-force counting oracle for the accuracy scores, written without the
// library's binning, contingency or aggregation code. It takes the fitted
// specs as given and redoes bin assignment by linear scan.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "synthqa/accuracy.hpp"
#include "synthqa/binning.hpp"
#include "synthqa/csv.hpp"
#include "synthqa/datamodel.hpp"

namespace synthqa::testing {

inline int oracle_bin(const BinningSpec& spec, const Column& column, std::size_t row) {
  const int values = spec.kind == BinningSpec::Kind::kTopCategories
                         ? static_cast<int>(spec.labels.size())
                         : (spec.has_value_bins ? static_cast<int>(spec.edges.size()) + 1 : 0);
  if (column.is_missing(row)) return spec.includes_missing_bin ? values : -1;
  if (spec.kind == BinningSpec::Kind::kTopCategories) {
    const std::string& label = *column.label(row);
    for (std::size_t i = 0; i < spec.labels.size(); ++i) {
      if (spec.labels[i] == label) return static_cast<int>(i);
    }
    return -1;
  }
  if (!spec.has_value_bins) return -1;
  const double v = *column.number(row);
  int bin = 0;
  while (bin < static_cast<int>(spec.edges.size()) && v > spec.edges[bin]) ++bin;
  return bin;
}

inline double oracle_tvd_score(const std::map<std::vector<int>, double>& a, double na,
                               const std::map<std::vector<int>, double>& b, double nb) {
  std::map<std::vector<int>, std::pair<double, double>> joint;
  for (const auto& [k, c] : a) joint[k].first = c;
  for (const auto& [k, c] : b) joint[k].second = c;
  double l1 = 0.0;
  for (const auto& [k, c] : joint) l1 += std::abs(c.first / na - c.second / nb);
  return std::max(0.0, 1.0 - 0.5 * l1);
}

// Counts of bin tuples over `rows`, skipping rows where any bin is excluded.
inline double oracle_count(const std::vector<std::pair<const BinningSpec*, const Column*>>& cols,
                           const std::vector<std::vector<std::size_t>>& rows,
                           std::map<std::vector<int>, double>& counts) {
  double usable = 0.0;
  for (const auto& r : rows) {
    std::vector<int> key;
    bool excluded = false;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const int b = oracle_bin(*cols[c].first, *cols[c].second, r[c]);
      if (b < 0) excluded = true;
      key.push_back(b);
    }
    if (excluded) continue;
    counts[key] += 1.0;
    usable += 1.0;
  }
  return usable;
}

struct OracleScores {
  std::map<std::string, double> univariate;
  std::map<std::pair<std::string, std::string>, double> bivariate;
  std::map<std::string, double> coherence;
};

// Successive-event pairs per subject, grouping rows by key with a plain scan.
inline std::vector<std::pair<std::size_t, std::size_t>> oracle_pairs(const Dataset& d,
                                                                     std::uint64_t seed) {
  const Column& key = d.column(*d.sequence_key());
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    const std::string k = key.format(r);
    if (!groups.count(k)) order.push_back(k);
    groups[k].push_back(r);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& k : order) {
    const auto& rows = groups[k];
    if (rows.size() < 2) continue;
    const std::size_t t = rows.size() == 2 ? 0 : coherence_start_index(seed, k, rows.size());
    pairs.emplace_back(rows[t], rows[t + 1]);
  }
  return pairs;
}

inline OracleScores tvd_oracle(const Dataset& trn, const Dataset& syn,
                               std::span<const BinningSpec> specs, bool sequential,
                               std::uint64_t seed) {
  OracleScores out;
  auto all_rows = [](const Dataset& d, std::size_t width) {
    std::vector<std::vector<std::size_t>> rows;
    for (std::size_t r = 0; r < d.n_rows(); ++r) rows.emplace_back(width, r);
    return rows;
  };
  for (const auto& spec : specs) {
    std::map<std::vector<int>, double> a, b;
    const double na = oracle_count({{&spec, &trn.column(spec.column)}}, all_rows(trn, 1), a);
    const double nb = oracle_count({{&spec, &syn.column(spec.column)}}, all_rows(syn, 1), b);
    out.univariate[spec.column] = nb == 0.0 ? 0.0 : oracle_tvd_score(a, na, b, nb);
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (std::size_t j = i + 1; j < specs.size(); ++j) {
      std::map<std::vector<int>, double> a, b;
      const auto& si = specs[i];
      const auto& sj = specs[j];
      const double na = oracle_count(
          {{&si, &trn.column(si.column)}, {&sj, &trn.column(sj.column)}}, all_rows(trn, 2), a);
      const double nb = oracle_count(
          {{&si, &syn.column(si.column)}, {&sj, &syn.column(sj.column)}}, all_rows(syn, 2), b);
      out.bivariate[{si.column, sj.column}] =
          na == 0.0 ? 1.0 : (nb == 0.0 ? 0.0 : oracle_tvd_score(a, na, b, nb));
    }
  }
  if (sequential) {
    const auto pt = oracle_pairs(trn, seed);
    const auto ps = oracle_pairs(syn, seed);
    for (const auto& spec : specs) {
      std::map<std::vector<int>, double> a, b;
      std::vector<std::vector<std::size_t>> rt, rs;
      for (const auto& [x, y] : pt) rt.push_back({x, y});
      for (const auto& [x, y] : ps) rs.push_back({x, y});
      const Column& ct = trn.column(spec.column);
      const Column& cs = syn.column(spec.column);
      const double na = oracle_count({{&spec, &ct}, {&spec, &ct}}, rt, a);
      const double nb = oracle_count({{&spec, &cs}, {&spec, &cs}}, rs, b);
      out.coherence[spec.column] =
          na == 0.0 ? 1.0 : (nb == 0.0 ? 0.0 : oracle_tvd_score(a, na, b, nb));
    }
  }
  return out;
}

struct Fixture {
  Dataset trn;
  Dataset syn;
  bool sequential = false;
};

// Small random dataset pair: up to 100 rows, 5 columns mixing numeric and
// categorical values with missing cells. Sequential fixtures carry a "sid"
// key; `two_event_subjects` makes every subject exactly two events long.
// A nonzero `levels` caps the distinct values per column.
inline Fixture random_fixture(std::mt19937_64& rng, bool sequential, bool two_event_subjects,
                              unsigned levels = 0) {
  const unsigned numeric_levels = levels ? levels : 9;
  const unsigned category_levels = levels ? levels : 6;
  const std::size_t n_cols = 1 + rng() % 5;
  auto build = [&](Role role) {
    std::size_t n_rows = 2 + rng() % 99;
    if (sequential && two_event_subjects) n_rows -= n_rows % 2;
    std::vector<std::vector<std::string>> cells(n_rows);
    std::vector<std::string> header;
    if (sequential) header.push_back("sid");
    for (std::size_t c = 0; c < n_cols; ++c) header.push_back("c" + std::to_string(c));
    std::size_t subject = 0, left = 0;
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (sequential) {
        if (left == 0) {
          ++subject;
          left = two_event_subjects ? 2 : 1 + rng() % 6;
        }
        --left;
        cells[r].push_back("s" + std::to_string(subject));
      }
      for (std::size_t c = 0; c < n_cols; ++c) {
        const bool missing = rng() % 8 == 0;
        if (missing) {
          cells[r].emplace_back();
        } else if (c % 2 == 0) {
          cells[r].push_back(std::to_string(static_cast<int>(rng() % numeric_levels)) + ".5");
        } else {
          cells[r].push_back(std::string(1, static_cast<char>('a' + rng() % category_levels)));
        }
      }
    }
    csv::Table table{header, cells};
    SchemaHints hints;
    for (std::size_t c = 0; c < n_cols; ++c) {
      hints["c" + std::to_string(c)] = c % 2 == 0 ? ColumnKind::kNumeric
                                                  : ColumnKind::kCategorical;
    }
    if (sequential) hints["sid"] = ColumnKind::kCategorical;
    Dataset d = dataset_from_table(table, role, hints);
    return sequential ? d.with_sequence_key(std::string("sid")) : d;
  };
  Dataset trn = build(Role::kTraining);
  Dataset syn = build(Role::kSynthetic);
  return {std::move(trn), std::move(syn), sequential};
}

}  // namespace synthqa::testing
