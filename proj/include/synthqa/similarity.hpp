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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synthqa/embedding.hpp"

namespace synthqa {

// Arithmetic mean of the rows, not re-normalized. Throws on an empty matrix.
std::vector<double> centroid(const EmbeddingMatrix& matrix);

// u.v / (|u| |v|), clamped to [-1, 1]. Throws when either norm is zero or the
// lengths differ.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

using Point2 = std::array<double, 2>;

struct ProjectedSet {
  Role provenance = Role::kTraining;
  std::vector<Point2> points;
  Point2 centroid{};
};

// Shared two-component PCA basis fit on the concatenation of all inputs.
struct PcaProjection {
  std::vector<ProjectedSet> sets;  // input order
  std::array<double, 2> variances{};
  std::array<std::vector<double>, 2> components;
  bool rank_zero = false;  // all rows identical; both components are zero
};

// Covariance eigendecomposition of the mean-centered rows. Components are
// ordered by descending eigenvalue; each is signed so its largest-magnitude
// loading is positive. Needs at least three rows in total.
PcaProjection pca_project(std::span<const EmbeddingMatrix* const> matrices);

struct LogisticModel {
  std::vector<double> weights;
  double intercept = 0.0;
  std::size_t iterations = 0;
};

struct LogisticOptions {
  double l2 = 1.0;                 // penalty on the weights; the intercept is free
  std::size_t max_iterations = 100;
  std::size_t history = 10;
  double gradient_tolerance = 1e-6;
};

// L2-regularized logistic regression, sum softplus(-margin) + l2/2 |w|^2,
// minimized with L-BFGS. `positives` and `negatives` are row-major with `dim`
// columns. Swapping the two blocks yields exactly the negated model.
LogisticModel fit_logistic(std::span<const double> positives, std::span<const double> negatives,
                           std::size_t dim, const LogisticOptions& options = {});

// Mann-Whitney AUC of the scores, ties counted one half. Throws unless both
// classes are present.
double rank_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct DiscriminatorOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  LogisticOptions logistic;
};

struct DiscriminatorResult {
  double auc = 0.5;
  // Out-of-fold scores, rows of a followed by rows of b; labels 1 for a.
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  std::size_t folds_used = 0;
  std::vector<std::string> warnings;
};

// Stratified k-fold cross-validated logistic discriminator between a (label 1)
// and b (label 0) on features standardized with training-fold statistics.
// Fold membership of a row depends only on the seed, its block size and its
// position, so swapping a and b reproduces the same folds.
DiscriminatorResult discriminator_auc(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                                      const DiscriminatorOptions& options = {});

struct SimilarityResult {
  double cosine_similarity_training_synthetic = 0.0;
  std::optional<double> cosine_similarity_training_holdout;
  double discriminator_auc_training_synthetic = 0.5;
  std::optional<double> discriminator_auc_training_holdout;
  PcaProjection pca;
  std::vector<std::string> warnings;
};

SimilarityResult compute_similarity(const EmbeddingMatrix& trn, const EmbeddingMatrix& syn,
                                    const EmbeddingMatrix* hol,
                                    const DiscriminatorOptions& options = {});

}  // namespace synthqa
