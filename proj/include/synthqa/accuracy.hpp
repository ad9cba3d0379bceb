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
#include <utility>
#include <vector>

#include "synthqa/binning.hpp"
#include "synthqa/datamodel.hpp"

namespace synthqa {

// Normalized joint frequencies of two binned columns, row-major.
struct ContingencyTable {
  std::string row_column;
  std::string col_column;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> cells;
  std::size_t usable_rows = 0;

  double at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
};

// Rows where either side is excluded are dropped before normalizing. Throws
// when no row is usable.
ContingencyTable contingency_table(std::span<const BinIndex> row_bins, const BinningSpec& row_spec,
                                   std::span<const BinIndex> col_bins, const BinningSpec& col_spec);

// 1 - TVD of two frequency vectors over the same bins, clamped to [0, 1].
double univariate_accuracy(const FrequencyVector& trn, const FrequencyVector& syn);

// 1 - entrywise TVD of two contingency tables of equal shape, clamped to [0, 1].
double bivariate_accuracy(const ContingencyTable& trn, const ContingencyTable& syn);

// Expected accuracy of a same-sized sample drawn from the training
// distribution: 1 - 1/2 sum_i sqrt(2 p_i (1 - p_i) (1/n_trn + 1/n_syn) / pi).
double expected_max_accuracy(std::span<const double> probabilities, std::size_t n_trn,
                             std::size_t n_syn);
double expected_max_accuracy(const FrequencyVector& trn, std::size_t n_trn, std::size_t n_syn);
double expected_max_accuracy(const ContingencyTable& trn, std::size_t n_trn, std::size_t n_syn);

// Start position t (0-based, pair is (t, t + 1)) drawn for a subject with
// `length` >= 2 events. Depends only on the seed and the subject key.
std::size_t coherence_start_index(std::uint64_t seed, std::string_view subject_key,
                                  std::size_t length);

inline constexpr std::string_view kSuccessorSuffix = "'";

// One row per subject with at least two events: for each target column m the
// wide table holds m (event t) and m' (event t + 1). Context columns and the
// sequence key are not carried over. Throws when no subject is eligible.
Dataset coherence_pairs(const Dataset& dataset, std::uint64_t seed);

struct CoherenceItem {
  std::string column;
  std::vector<std::string> labels;
  ContingencyTable trn;
  ContingencyTable syn;
  double accuracy = 0.0;
  double accuracy_max = 1.0;
};

// Scores every column m of the wide tables through its (m, m') table. The binning
// spec of m is used for both sides.
std::vector<CoherenceItem> coherence_accuracy(const Dataset& wide_trn, const Dataset& wide_syn,
                                              std::span<const BinningSpec> specs);

struct UnivariateItem {
  std::string column;
  bool from_context = false;
  std::vector<std::string> labels;
  FrequencyVector trn;
  FrequencyVector syn;
  double accuracy = 0.0;
  double accuracy_max = 1.0;
};

struct BivariateItem {
  std::string column_a;
  std::string column_b;
  bool context_pair = false;  // context x target
  std::vector<std::string> labels_a;
  std::vector<std::string> labels_b;
  ContingencyTable trn;
  ContingencyTable syn;
  double accuracy = 0.0;
  double accuracy_max = 1.0;
};

struct AccuracyResult {
  bool sequential = false;
  std::vector<UnivariateItem> univariates;
  std::vector<BivariateItem> bivariates;
  std::vector<CoherenceItem> coherences;

  double univariate = 0.0;
  std::optional<double> bivariate;  // unset when there is no column pair
  std::optional<double> coherence;  // sequential data only
  double overall = 0.0;

  double univariate_max = 1.0;
  std::optional<double> bivariate_max;
  std::optional<double> coherence_max;
  double overall_max = 1.0;

  std::vector<std::string> warnings;

  std::map<std::string, double> per_column_univariate() const;
  std::map<std::pair<std::string, std::string>, double> per_pair_bivariate() const;
  std::map<std::string, double> per_column_coherence() const;
};

// Mean of univariate and bivariate for flat data, of all three for sequential
// data. Components that are not defined (no column pair) are skipped; throws
// when coherence is required but absent.
double overall_accuracy(const AccuracyResult& result, bool sequential);

// Specs for every column except the sequence key. Context columns of
// sequential data are fit on one row per subject.
std::vector<BinningSpec> fit_column_specs(const Dataset& trn, bool sequential,
                                          std::size_t k = kDefaultBins);

struct AccuracyOptions {
  bool sequential = false;
  std::uint64_t seed = 42;
};

// Univariates for every spec'd column, bivariates for every target x target
// pair and every context x target pair, coherence for sequential data, plus
// the expected-holdout reference for each. Context columns are recognised by
// Column::from_context().
AccuracyResult compute_accuracy(const Dataset& trn, const Dataset& syn,
                                std::span<const BinningSpec> specs,
                                const AccuracyOptions& options = {});

}  // namespace synthqa
