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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synthqa/datamodel.hpp"
#include "synthqa/embedding.hpp"

namespace synthqa {

// sqrt of the sequential sum of squared differences; the reference against
// which every vectorized distance is settled.
double canonical_distance(const double* a, const double* b, std::size_t dim);

// Exact minimum L2 distance from one query row to the reference rows.
double nearest_distance(std::span<const double> query, const EmbeddingMatrix& reference);

// Exact nearest distance for every query row. A tiled vectorized pass over
// the norm expansion finds the candidates within rounding of the minimum;
// those are re-evaluated with
// canonical_distance, so results equal a brute-force scalar search bit for
// bit and do not depend on the ISA or the worker count.
std::vector<double> nearest_distances(const EmbeddingMatrix& query,
                                      const EmbeddingMatrix& reference);

// Squared-distance gap below which a training and a holdout neighbour count
// as equally close.
inline constexpr double kDcrTieTolerance = 1e-12;

struct DistancesResult {
  double dcr_training = 0.0;
  std::optional<double> dcr_holdout;
  std::optional<double> dcr_share;
  double ims_training = 0.0;
  std::optional<double> ims_holdout;
  std::vector<double> dcr_cdf_training;  // ascending
  std::vector<double> dcr_cdf_holdout;   // ascending; empty without holdout
  std::size_t reference_rows = 0;        // per reference set after equalizing
  std::vector<std::string> warnings;
};

// Rows kept from a reference set of size n when both sets are cut to `keep`:
// a seeded uniform draw without replacement, returned in ascending order.
std::vector<std::size_t> subsample_rows(std::size_t n, std::size_t keep, std::uint64_t seed);

// Distance fields of DistancesResult. With a holdout, the larger of trn and
// hol is subsampled to the size of the smaller before any distance is taken.
DistancesResult dcr_metrics(const EmbeddingMatrix& syn, const EmbeddingMatrix& trn,
                            const EmbeddingMatrix* hol, std::uint64_t seed = 42);

// Share of synthetic samples equal to at least one reference sample on the
// raw values of `columns` (missing equals missing). For sequential data a
// sample is a whole subject: its context values and all events in order.
double identical_match_share(const Dataset& syn, const Dataset& reference,
                             std::span<const std::string> columns, bool sequential);

}  // namespace synthqa
