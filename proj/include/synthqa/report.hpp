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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "synthqa/accuracy.hpp"
#include "synthqa/binning.hpp"
#include "synthqa/distances.hpp"
#include "synthqa/similarity.hpp"

namespace synthqa {

inline constexpr int kSchemaVersion = 1;

struct ColumnEcho {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;
  bool from_context = false;
  bool operator==(const ColumnEcho&) const = default;
};

// Settings and shapes of the run, echoed into the metrics document.
struct RunEcho {
  std::uint64_t seed = 42;
  std::string encoder = "hashing";
  std::size_t folds = 5;
  std::size_t truncation = 2048;
  bool sequential = false;
  std::optional<std::string> sequence_key;
  std::vector<ColumnEcho> columns;
  std::size_t trn_samples = 0;
  std::size_t syn_samples = 0;
  std::optional<std::size_t> hol_samples;
  bool operator==(const RunEcho&) const = default;
};

struct PairScore {
  std::string column_a;
  std::string column_b;
  double accuracy = 0.0;
  bool operator==(const PairScore&) const = default;
};

struct MetricsDocument {
  int schema_version = kSchemaVersion;

  double overall = 0.0;
  double univariate = 0.0;
  std::optional<double> bivariate;
  std::optional<double> coherence;
  double overall_max = 1.0;
  double univariate_max = 1.0;
  std::optional<double> bivariate_max;
  std::optional<double> coherence_max;

  double cosine_similarity_training_synthetic = 0.0;
  std::optional<double> cosine_similarity_training_holdout;
  double discriminator_auc_training_synthetic = 0.5;
  std::optional<double> discriminator_auc_training_holdout;

  double ims_training = 0.0;
  std::optional<double> ims_holdout;
  double dcr_training = 0.0;
  std::optional<double> dcr_holdout;
  std::optional<double> dcr_share;

  std::map<std::string, double> univariate_by_column;
  std::vector<PairScore> bivariate_by_pair;
  std::map<std::string, double> coherence_by_column;

  std::vector<std::string> warnings;
  RunEcho config;

  bool operator==(const MetricsDocument&) const = default;
};

MetricsDocument assemble_metrics(const AccuracyResult& accuracy, const SimilarityResult& similarity,
                                 const DistancesResult& distances, RunEcho config,
                                 std::vector<std::string> warnings);

// Numbers are rounded to four decimals here and nowhere else.
nlohmann::json to_json(const MetricsDocument& doc);
MetricsDocument metrics_from_json(const nlohmann::json& json);
// Pretty-printed JSON with a trailing newline.
std::string serialize_metrics(const MetricsDocument& doc);

// Plain-text summary of the headline metrics and their references.
std::string summary_table(const MetricsDocument& doc);

struct ReportInputs {
  const MetricsDocument* metrics = nullptr;
  const AccuracyResult* accuracy = nullptr;
  const SimilarityResult* similarity = nullptr;
  const DistancesResult* distances = nullptr;
  std::span<const BinningSpec> specs;
  std::string title = "Synthetic data quality report";
};

inline constexpr std::size_t kCdfThinThreshold = 5000;
inline constexpr std::size_t kCdfThinPoints = 1000;
inline constexpr std::size_t kScatterPointsPerSet = 2000;

// Evenly spaced quantiles of an ascending array; arrays of at most
// `threshold` values are returned unchanged.
std::vector<double> thin_quantiles(std::span<const double> sorted, std::size_t threshold,
                                   std::size_t points);

// A single self-contained HTML document with inline SVG charts. Pure
// function of the inputs.
std::string render_html(const ReportInputs& inputs);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace synthqa
