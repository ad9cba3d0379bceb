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

#include "synthqa/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "synthqa/error.hpp"
#include "synthqa/parallel.hpp"
#include "synthqa/random.hpp"

namespace synthqa {
namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("accuracy", message); }

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::optional<FrequencyVector> try_frequency(std::span<const BinIndex> bins,
                                             const BinningSpec& spec) {
  try {
    return frequency_vector(bins, spec);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<ContingencyTable> try_table(std::span<const BinIndex> a, const BinningSpec& sa,
                                          std::span<const BinIndex> b, const BinningSpec& sb) {
  try {
    return contingency_table(a, sa, b, sb);
  } catch (const Error&) {
    return std::nullopt;
  }
}

ContingencyTable empty_table(const BinningSpec& a, const BinningSpec& b) {
  ContingencyTable table;
  table.row_column = a.column;
  table.col_column = b.column;
  table.rows = a.bin_count();
  table.cols = b.bin_count();
  table.cells.assign(table.rows * table.cols, 0.0);
  return table;
}

std::vector<std::size_t> first_rows(const std::vector<Subject>& subjects) {
  std::vector<std::size_t> rows;
  rows.reserve(subjects.size());
  for (const auto& s : subjects) rows.push_back(s.rows.front());
  return rows;
}

}  // namespace

ContingencyTable contingency_table(std::span<const BinIndex> row_bins, const BinningSpec& row_spec,
                                   std::span<const BinIndex> col_bins,
                                   const BinningSpec& col_spec) {
  if (row_bins.size() != col_bins.size()) fail("contingency inputs differ in length");
  ContingencyTable table = empty_table(row_spec, col_spec);
  std::vector<std::size_t> counts(table.cells.size(), 0);
  std::size_t usable = 0;
  for (std::size_t r = 0; r < row_bins.size(); ++r) {
    const BinIndex a = row_bins[r];
    const BinIndex b = col_bins[r];
    if (a == kExcludedBin || b == kExcludedBin) continue;
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= table.rows ||
        static_cast<std::size_t>(b) >= table.cols) {
      fail("bin index out of range for pair ('" + row_spec.column + "', '" + col_spec.column +
           "')");
    }
    ++counts[static_cast<std::size_t>(a) * table.cols + static_cast<std::size_t>(b)];
    ++usable;
  }
  if (usable == 0) {
    fail("pair ('" + row_spec.column + "', '" + col_spec.column + "') has no usable rows");
  }
  table.usable_rows = usable;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    table.cells[i] = static_cast<double>(counts[i]) / static_cast<double>(usable);
  }
  return table;
}

double univariate_accuracy(const FrequencyVector& trn, const FrequencyVector& syn) {
  if (trn.proportions.size() != syn.proportions.size()) {
    fail("frequency vectors of '" + trn.column + "' differ in length");
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < trn.proportions.size(); ++i) {
    l1 += std::abs(trn.proportions[i] - syn.proportions[i]);
  }
  return clamp_unit(1.0 - 0.5 * l1);
}

double bivariate_accuracy(const ContingencyTable& trn, const ContingencyTable& syn) {
  if (trn.rows != syn.rows || trn.cols != syn.cols) {
    fail("contingency tables of ('" + trn.row_column + "', '" + trn.col_column +
         "') differ in shape");
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < trn.cells.size(); ++i) l1 += std::abs(trn.cells[i] - syn.cells[i]);
  return clamp_unit(1.0 - 0.5 * l1);
}

double expected_max_accuracy(std::span<const double> probabilities, std::size_t n_trn,
                             std::size_t n_syn) {
  if (n_trn == 0 || n_syn == 0) fail("sample sizes must be positive");
  const double scale =
      2.0 * (1.0 / static_cast<double>(n_trn) + 1.0 / static_cast<double>(n_syn)) /
      std::numbers::pi;
  double expected_l1 = 0.0;
  for (double p : probabilities) {
    const double variance_term = std::max(0.0, p * (1.0 - p));
    expected_l1 += std::sqrt(variance_term * scale);
  }
  return clamp_unit(1.0 - 0.5 * expected_l1);
}

double expected_max_accuracy(const FrequencyVector& trn, std::size_t n_trn, std::size_t n_syn) {
  return expected_max_accuracy(trn.proportions, n_trn, n_syn);
}

double expected_max_accuracy(const ContingencyTable& trn, std::size_t n_trn, std::size_t n_syn) {
  return expected_max_accuracy(trn.cells, n_trn, n_syn);
}

std::size_t coherence_start_index(std::uint64_t seed, std::string_view subject_key,
                                  std::size_t length) {
  if (length < 2) fail("a subject needs at least two events for a coherence pair");
  random::SplitMix64 rng(seed, random::fnv1a64(subject_key));
  return static_cast<std::size_t>(rng.below(length - 1));
}

Dataset coherence_pairs(const Dataset& dataset, std::uint64_t seed) {
  if (!dataset.sequence_key()) fail("coherence requires a sequence key");
  const auto subjects = dataset.subjects();
  std::vector<std::size_t> first, second;
  for (const auto& subject : subjects) {
    if (subject.rows.size() < 2) continue;
    const std::size_t t = coherence_start_index(seed, subject.key, subject.rows.size());
    first.push_back(subject.rows[t]);
    second.push_back(subject.rows[t + 1]);
  }
  if (first.empty()) fail("no subject has two or more events");

  std::vector<Column> columns;
  for (const auto& column : dataset.columns()) {
    if (column.name() == *dataset.sequence_key() || column.from_context()) continue;
    columns.push_back(column.take(first));
    columns.push_back(
        column.take(second).renamed(column.name() + std::string(kSuccessorSuffix), false));
  }
  return Dataset(dataset.role(), std::move(columns));
}

std::vector<CoherenceItem> coherence_accuracy(const Dataset& wide_trn, const Dataset& wide_syn,
                                              std::span<const BinningSpec> specs) {
  std::vector<CoherenceItem> items(specs.size());
  parallel_for(specs.size(), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const BinningSpec& spec = specs[i];
      const std::string successor = spec.column + std::string(kSuccessorSuffix);
      const auto trn_a = apply_binning(wide_trn.column(spec.column), spec);
      const auto trn_b = apply_binning(wide_trn.column(successor), spec);
      const auto syn_a = apply_binning(wide_syn.column(spec.column), spec);
      const auto syn_b = apply_binning(wide_syn.column(successor), spec);

      CoherenceItem& item = items[i];
      item.column = spec.column;
      item.labels = spec.bin_labels();
      auto trn_table = try_table(trn_a, spec, trn_b, spec);
      if (!trn_table) {
        item.trn = empty_table(spec, spec);
        item.syn = empty_table(spec, spec);
        item.accuracy = 1.0;
        item.accuracy_max = 1.0;
        continue;
      }
      item.trn = std::move(*trn_table);
      item.trn.col_column = successor;
      auto syn_table = try_table(syn_a, spec, syn_b, spec);
      if (syn_table) {
        item.syn = std::move(*syn_table);
        item.syn.col_column = successor;
        item.accuracy = bivariate_accuracy(item.trn, item.syn);
      } else {
        item.syn = empty_table(spec, spec);
        item.accuracy = 0.0;
      }
      const std::size_t n_syn = item.syn.usable_rows > 0 ? item.syn.usable_rows
                                                         : item.trn.usable_rows;
      item.accuracy_max = expected_max_accuracy(item.trn, item.trn.usable_rows, n_syn);
    }
  });
  return items;
}

std::map<std::string, double> AccuracyResult::per_column_univariate() const {
  std::map<std::string, double> out;
  for (const auto& item : univariates) out[item.column] = item.accuracy;
  return out;
}

std::map<std::pair<std::string, std::string>, double> AccuracyResult::per_pair_bivariate() const {
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& item : bivariates) out[{item.column_a, item.column_b}] = item.accuracy;
  return out;
}

std::map<std::string, double> AccuracyResult::per_column_coherence() const {
  std::map<std::string, double> out;
  for (const auto& item : coherences) out[item.column] = item.accuracy;
  return out;
}

double overall_accuracy(const AccuracyResult& result, bool sequential) {
  std::vector<double> parts{result.univariate};
  if (result.bivariate) parts.push_back(*result.bivariate);
  if (sequential) {
    if (!result.coherence) fail("sequential overall accuracy needs a coherence score");
    parts.push_back(*result.coherence);
  }
  return mean(parts);
}

std::vector<BinningSpec> fit_column_specs(const Dataset& trn, bool sequential, std::size_t k) {
  std::vector<std::size_t> subject_rows;
  if (sequential) subject_rows = first_rows(trn.subjects());
  std::vector<BinningSpec> specs;
  for (const auto& column : trn.columns()) {
    if (trn.sequence_key() && column.name() == *trn.sequence_key()) continue;
    if (sequential && column.from_context()) {
      specs.push_back(fit_binning(column, k, std::span<const std::size_t>(subject_rows)));
    } else {
      specs.push_back(fit_binning(column, k));
    }
  }
  return specs;
}

AccuracyResult compute_accuracy(const Dataset& trn, const Dataset& syn,
                                std::span<const BinningSpec> specs,
                                const AccuracyOptions& options) {
  AccuracyResult result;
  result.sequential = options.sequential;
  if (specs.empty()) fail("no columns to score");
  if (options.sequential && (!trn.sequence_key() || !syn.sequence_key())) {
    fail("sequential scoring requires a sequence key on both datasets");
  }

  std::vector<std::size_t> trn_subject_rows, syn_subject_rows;
  if (options.sequential) {
    trn_subject_rows = first_rows(trn.subjects());
    syn_subject_rows = first_rows(syn.subjects());
  }

  const std::size_t n_cols = specs.size();
  std::vector<bool> is_context(n_cols);
  std::vector<std::vector<BinIndex>> trn_bins(n_cols), syn_bins(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    is_context[c] = trn.column(specs[c].column).from_context();
  }
  parallel_for(n_cols, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      trn_bins[c] = apply_binning(trn.column(specs[c].column), specs[c]);
      syn_bins[c] = apply_binning(syn.column(specs[c].column), specs[c]);
    }
  });

  // Univariates.
  result.univariates.resize(n_cols);
  std::vector<std::string> syn_gaps(n_cols);
  parallel_for(n_cols, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const BinningSpec& spec = specs[c];
      UnivariateItem& item = result.univariates[c];
      item.column = spec.column;
      item.from_context = is_context[c];
      item.labels = spec.bin_labels();
      std::vector<BinIndex> trn_level, syn_level;
      const bool per_subject = options.sequential && is_context[c];
      if (per_subject) {
        trn_level = apply_binning(trn.column(spec.column), spec,
                                  std::span<const std::size_t>(trn_subject_rows));
        syn_level = apply_binning(syn.column(spec.column), spec,
                                  std::span<const std::size_t>(syn_subject_rows));
      }
      item.trn = frequency_vector(per_subject ? trn_level : trn_bins[c], spec);
      auto f_syn = try_frequency(per_subject ? syn_level : syn_bins[c], spec);
      if (f_syn) {
        item.syn = std::move(*f_syn);
        item.accuracy = univariate_accuracy(item.trn, item.syn);
      } else {
        item.syn.column = spec.column;
        item.syn.proportions.assign(spec.bin_count(), 0.0);
        item.accuracy = 0.0;
        syn_gaps[c] = "syn: column '" + spec.column + "' has no values in any training bin";
      }
      const std::size_t n_syn = item.syn.usable_rows > 0 ? item.syn.usable_rows
                                                         : item.trn.usable_rows;
      item.accuracy_max = expected_max_accuracy(item.trn, item.trn.usable_rows, n_syn);
    }
  });
  for (auto& gap : syn_gaps) {
    if (!gap.empty()) result.warnings.push_back(std::move(gap));
  }

  // Bivariates: target x target (upper triangle) and context x target.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n_cols; ++a) {
    for (std::size_t b = a + 1; b < n_cols; ++b) {
      if (!is_context[a] && !is_context[b]) pairs.emplace_back(a, b);
    }
  }
  for (std::size_t a = 0; a < n_cols; ++a) {
    if (!is_context[a]) continue;
    for (std::size_t b = 0; b < n_cols; ++b) {
      if (!is_context[b]) pairs.emplace_back(a, b);
    }
  }
  result.bivariates.resize(pairs.size());
  parallel_for(pairs.size(), 4, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto [a, b] = pairs[p];
      BivariateItem& item = result.bivariates[p];
      item.column_a = specs[a].column;
      item.column_b = specs[b].column;
      item.context_pair = is_context[a];
      item.labels_a = specs[a].bin_labels();
      item.labels_b = specs[b].bin_labels();
      auto trn_table = try_table(trn_bins[a], specs[a], trn_bins[b], specs[b]);
      if (!trn_table) {
        // Every training row excluded on one side: nothing to compare against.
        item.trn = empty_table(specs[a], specs[b]);
        item.syn = empty_table(specs[a], specs[b]);
        item.accuracy = 1.0;
        item.accuracy_max = 1.0;
        continue;
      }
      item.trn = std::move(*trn_table);
      auto syn_table = try_table(syn_bins[a], specs[a], syn_bins[b], specs[b]);
      if (syn_table) {
        item.syn = std::move(*syn_table);
        item.accuracy = bivariate_accuracy(item.trn, item.syn);
      } else {
        item.syn = empty_table(specs[a], specs[b]);
        item.accuracy = 0.0;
      }
      const std::size_t n_syn = item.syn.usable_rows > 0 ? item.syn.usable_rows
                                                         : item.trn.usable_rows;
      item.accuracy_max = expected_max_accuracy(item.trn, item.trn.usable_rows, n_syn);
    }
  });

  // Coherence.
  if (options.sequential) {
    std::vector<BinningSpec> target_specs;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (!is_context[c]) target_specs.push_back(specs[c]);
    }
    if (!target_specs.empty()) {
      const Dataset wide_trn = coherence_pairs(trn, options.seed);
      std::optional<Dataset> wide_syn;
      try {
        wide_syn = coherence_pairs(syn, options.seed);
      } catch (const Error&) {
        result.warnings.push_back("syn: no subject has two or more events; coherence is 0");
      }
      if (wide_syn) {
        result.coherences = coherence_accuracy(wide_trn, *wide_syn, target_specs);
      } else {
        // Score against an empty synthetic side.
        for (const auto& spec : target_specs) {
          CoherenceItem item;
          item.column = spec.column;
          item.labels = spec.bin_labels();
          const auto a = apply_binning(wide_trn.column(spec.column), spec);
          const auto b = apply_binning(
              wide_trn.column(spec.column + std::string(kSuccessorSuffix)), spec);
          item.syn = empty_table(spec, spec);
          if (auto table = try_table(a, spec, b, spec)) {
            item.trn = std::move(*table);
            item.accuracy = 0.0;
            item.accuracy_max =
                expected_max_accuracy(item.trn, item.trn.usable_rows, item.trn.usable_rows);
          } else {
            item.trn = empty_table(spec, spec);
            item.accuracy = 1.0;
            item.accuracy_max = 1.0;
          }
          result.coherences.push_back(std::move(item));
        }
      }
    }
  }

  // Aggregates.
  auto collect = [](const auto& items, auto field) {
    std::vector<double> values;
    values.reserve(items.size());
    for (const auto& item : items) values.push_back(item.*field);
    return values;
  };
  result.univariate = mean(collect(result.univariates, &UnivariateItem::accuracy));
  result.univariate_max = mean(collect(result.univariates, &UnivariateItem::accuracy_max));
  if (!result.bivariates.empty()) {
    result.bivariate = mean(collect(result.bivariates, &BivariateItem::accuracy));
    result.bivariate_max = mean(collect(result.bivariates, &BivariateItem::accuracy_max));
  }
  if (options.sequential) {
    if (result.coherences.empty()) fail("sequential data has no target column for coherence");
    result.coherence = mean(collect(result.coherences, &CoherenceItem::accuracy));
    result.coherence_max = mean(collect(result.coherences, &CoherenceItem::accuracy_max));
  }
  result.overall = overall_accuracy(result, options.sequential);

  AccuracyResult maxima;
  maxima.univariate = result.univariate_max;
  maxima.bivariate = result.bivariate_max;
  maxima.coherence = result.coherence_max;
  result.overall_max = overall_accuracy(maxima, options.sequential);
  return result;
}

}  // namespace synthqa
