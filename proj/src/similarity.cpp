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

#include "synthqa/similarity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "synthqa/error.hpp"
#include "synthqa/parallel.hpp"
#include "synthqa/random.hpp"
#include "synthqa/simd/kernels.hpp"

namespace synthqa {
namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("similarity", message); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// Loss and gradient of one label block. sign is +1 for positives and -1 for
// negatives; the block's margins are sign * z.
double block_objective(std::span<const double> rows, std::size_t dim, double sign,
                       std::span<const double> theta, std::span<double> grad) {
  const auto& k = simd::active();
  std::fill(grad.begin(), grad.end(), 0.0);
  const std::size_t n = rows.size() / dim;
  const double intercept = theta[dim];
  double loss = 0.0;
  double grad_intercept = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = rows.data() + i * dim;
    const double z = k.dot(x, theta.data(), dim) + intercept;
    // d softplus(-sign z) / dz, written so that negating z and sign negates it exactly.
    const double r = sign > 0.0 ? -sigmoid(-z) : sigmoid(z);
    loss += sign > 0.0 ? softplus(-z) : softplus(z);
    k.axpy(r, x, grad.data(), dim);
    grad_intercept += r;
  }
  grad[dim] = grad_intercept;
  return loss;
}

class Objective {
 public:
  Objective(std::span<const double> pos, std::span<const double> neg, std::size_t dim, double l2)
      : pos_(pos), neg_(neg), dim_(dim), l2_(l2), gpos_(dim + 1), gneg_(dim + 1) {}

  double operator()(std::span<const double> theta, std::span<double> grad) {
    const double lp = block_objective(pos_, dim_, 1.0, theta, gpos_);
    const double ln = block_objective(neg_, dim_, -1.0, theta, gneg_);
    double penalty = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) penalty += theta[j] * theta[j];
    for (std::size_t j = 0; j < dim_; ++j) grad[j] = (gpos_[j] + gneg_[j]) + l2_ * theta[j];
    grad[dim_] = gpos_[dim_] + gneg_[dim_];
    return (lp + ln) + 0.5 * l2_ * penalty;
  }

 private:
  std::span<const double> pos_, neg_;
  std::size_t dim_;
  double l2_;
  std::vector<double> gpos_, gneg_;
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Column means and scales over both blocks; constant columns get scale 1.
struct Standardizer {
  std::vector<double> mean, scale;
};

Standardizer fit_standardizer(std::span<const double> a, std::span<const double> b,
                              std::size_t dim) {
  const std::size_t na = a.size() / dim, nb = b.size() / dim;
  const double n = static_cast<double>(na + nb);
  Standardizer s{std::vector<double>(dim), std::vector<double>(dim)};
  std::vector<double> sa(dim, 0.0), sb(dim, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < dim; ++j) sa[j] += a[i * dim + j];
  }
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < dim; ++j) sb[j] += b[i * dim + j];
  }
  for (std::size_t j = 0; j < dim; ++j) s.mean[j] = (sa[j] + sb[j]) / n;
  std::fill(sa.begin(), sa.end(), 0.0);
  std::fill(sb.begin(), sb.end(), 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = a[i * dim + j] - s.mean[j];
      sa[j] += d * d;
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = b[i * dim + j] - s.mean[j];
      sb[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    const double sd = std::sqrt((sa[j] + sb[j]) / n);
    s.scale[j] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

std::vector<double> gather_standardized(const EmbeddingMatrix& m,
                                        std::span<const std::size_t> rows,
                                        const Standardizer* s) {
  const std::size_t dim = EmbeddingMatrix::dims;
  std::vector<double> out(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double* src = m.row(rows[i]);
    double* dst = out.data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      dst[j] = s == nullptr ? src[j] : (src[j] - s->mean[j]) / s->scale[j];
    }
  }
  return out;
}

void standardize_in_place(std::vector<double>& rows, const Standardizer& s) {
  const std::size_t dim = s.mean.size();
  for (std::size_t i = 0; i < rows.size(); i += dim) {
    for (std::size_t j = 0; j < dim; ++j) rows[i + j] = (rows[i + j] - s.mean[j]) / s.scale[j];
  }
}

std::vector<std::size_t> fold_of_rows(std::size_t n, std::size_t k, std::uint64_t seed) {
  random::SplitMix64 rng(seed, n);
  const auto order = random::permutation(n, rng);
  std::vector<std::size_t> fold(n);
  for (std::size_t pos = 0; pos < n; ++pos) fold[order[pos]] = pos % k;
  return fold;
}

}  // namespace

std::vector<double> centroid(const EmbeddingMatrix& matrix) {
  if (matrix.rows == 0) fail("centroid of an empty matrix");
  std::vector<double> c(EmbeddingMatrix::dims, 0.0);
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    const double* r = matrix.row(i);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += r[j];
  }
  for (double& x : c) x /= static_cast<double>(matrix.rows);
  return c;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) fail("cosine similarity of vectors of different length");
  const double nu = std::sqrt(dot(u, u));
  const double nv = std::sqrt(dot(v, v));
  if (nu == 0.0 || nv == 0.0) fail("cosine similarity of a zero vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

PcaProjection pca_project(std::span<const EmbeddingMatrix* const> matrices) {
  const std::size_t dim = EmbeddingMatrix::dims;
  std::size_t total = 0;
  for (const auto* m : matrices) total += m->rows;
  if (total < 3) fail("PCA needs at least three rows");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(dim));
  Eigen::Index r = 0;
  for (const auto* m : matrices) {
    for (std::size_t i = 0; i < m->rows; ++i, ++r) {
      for (std::size_t j = 0; j < dim; ++j) x(r, static_cast<Eigen::Index>(j)) = m->row(i)[j];
    }
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(total - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) fail("covariance eigendecomposition did not converge");

  PcaProjection out;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), 2);
  const Eigen::Index last = static_cast<Eigen::Index>(dim) - 1;
  const double top = solver.eigenvalues()(last);
  out.rank_zero = !(top > 1e-20);
  for (int c = 0; c < 2; ++c) {
    out.components[c].assign(dim, 0.0);
    if (out.rank_zero) continue;
    Eigen::VectorXd v = solver.eigenvectors().col(last - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    basis.col(c) = v;
    out.variances[c] = std::max(0.0, solver.eigenvalues()(last - c));
    for (std::size_t j = 0; j < dim; ++j) out.components[c][j] = v(static_cast<Eigen::Index>(j));
  }

  const Eigen::MatrixXd projected = x * basis;
  r = 0;
  for (const auto* m : matrices) {
    ProjectedSet set;
    set.provenance = m->provenance;
    set.points.resize(m->rows);
    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < m->rows; ++i, ++r) {
      set.points[i] = {projected(r, 0), projected(r, 1)};
      c += x.row(r);
    }
    if (m->rows > 0) {
      c /= static_cast<double>(m->rows);
      const Eigen::RowVector2d pc = c * basis;
      set.centroid = {pc(0), pc(1)};
    }
    out.sets.push_back(std::move(set));
  }
  return out;
}

LogisticModel fit_logistic(std::span<const double> positives, std::span<const double> negatives,
                           std::size_t dim, const LogisticOptions& options) {
  if (dim == 0 || positives.size() % dim != 0 || negatives.size() % dim != 0) {
    fail("logistic inputs are not row-major with the given width");
  }
  const std::size_t n_params = dim + 1;
  const std::size_t n_rows = (positives.size() + negatives.size()) / dim;
  Objective objective(positives, negatives, dim, options.l2);

  std::vector<double> theta(n_params, 0.0), grad(n_params), trial(n_params),
      trial_grad(n_params), direction(n_params), alpha(options.history);
  double f = objective(theta, grad);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  LogisticModel model;
  const double tolerance = options.gradient_tolerance * std::max<double>(1.0, n_rows);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    if (max_abs(grad) <= tolerance) break;

    // Two-loop recursion.
    direction = grad;
    for (std::size_t h = s_hist.size(); h-- > 0;) {
      alpha[h] = rho_hist[h] * dot(s_hist[h], direction);
      for (std::size_t j = 0; j < n_params; ++j) direction[j] -= alpha[h] * y_hist[h][j];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) {
      gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    } else {
      gamma = 1.0 / std::max(1.0, std::sqrt(dot(grad, grad)));
    }
    for (double& d : direction) d *= gamma;
    for (std::size_t h = 0; h < s_hist.size(); ++h) {
      const double beta = rho_hist[h] * dot(y_hist[h], direction);
      for (std::size_t j = 0; j < n_params; ++j) direction[j] += s_hist[h][j] * (alpha[h] - beta);
    }
    for (double& d : direction) d = -d;

    double slope = dot(grad, direction);
    if (!(slope < 0.0)) {
      // Not a descent direction: restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      const double g_norm = std::sqrt(dot(grad, grad));
      for (std::size_t j = 0; j < n_params; ++j) direction[j] = -grad[j] / std::max(1.0, g_norm);
      slope = dot(grad, direction);
    }

    // Armijo backtracking.
    double step = 1.0;
    double f_trial = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      for (std::size_t j = 0; j < n_params; ++j) trial[j] = theta[j] + step * direction[j];
      f_trial = objective(trial, trial_grad);
      if (std::isfinite(f_trial) && f_trial <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    model.iterations = iter + 1;
    if (!accepted) break;

    std::vector<double> s(n_params), y(n_params);
    for (std::size_t j = 0; j < n_params; ++j) {
      s[j] = trial[j] - theta[j];
      y[j] = trial_grad[j] - grad[j];
    }
    const double sy = dot(s, y);
    const double f_previous = f;
    theta.swap(trial);
    grad.swap(trial_grad);
    f = f_trial;
    if (sy > 1e-12) {
      if (s_hist.size() == options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    if (f_previous - f <= 1e-12 * std::max(1.0, std::abs(f))) break;
  }
  model.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(dim));
  model.intercept = theta[dim];
  return model;
}

double rank_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) fail("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] != 0) {
        positive_rank_sum += mid_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) fail("AUC needs both classes");
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

DiscriminatorResult discriminator_auc(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                                      const DiscriminatorOptions& options) {
  if (a.rows == 0 || b.rows == 0) fail("discriminator needs two non-empty matrices");
  if (options.folds == 0) fail("fold count must be positive");
  const std::size_t dim = EmbeddingMatrix::dims;
  DiscriminatorResult result;
  std::size_t k = std::min({options.folds, a.rows, b.rows});
  if (k < options.folds) {
    result.warnings.push_back("discriminator folds reduced from " +
                              std::to_string(options.folds) + " to " + std::to_string(k) +
                              " by the smaller class");
  }
  const auto fold_a = fold_of_rows(a.rows, k, options.seed);
  const auto fold_b = fold_of_rows(b.rows, k, options.seed);
  const bool in_sample = k < 2;
  if (in_sample) {
    result.warnings.push_back("too few rows for cross-validation; discriminator AUC is in-sample");
    k = 1;
  }
  result.folds_used = k;
  result.scores.assign(a.rows + b.rows, 0.0);
  result.labels.assign(a.rows + b.rows, 0);
  std::fill(result.labels.begin(), result.labels.begin() + static_cast<std::ptrdiff_t>(a.rows),
            1);

  parallel_for(k, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      std::vector<std::size_t> train_a, train_b, test_a, test_b;
      for (std::size_t i = 0; i < a.rows; ++i) {
        (!in_sample && fold_a[i] == f ? test_a : train_a).push_back(i);
        if (in_sample) test_a.push_back(i);
      }
      for (std::size_t i = 0; i < b.rows; ++i) {
        (!in_sample && fold_b[i] == f ? test_b : train_b).push_back(i);
        if (in_sample) test_b.push_back(i);
      }
      auto xa = gather_standardized(a, train_a, nullptr);
      auto xb = gather_standardized(b, train_b, nullptr);
      const Standardizer s = fit_standardizer(xa, xb, dim);
      standardize_in_place(xa, s);
      standardize_in_place(xb, s);
      const LogisticModel model = fit_logistic(xa, xb, dim, options.logistic);

      const auto& kern = simd::active();
      auto score = [&](const EmbeddingMatrix& m, std::span<const std::size_t> rows,
                       std::size_t offset) {
        const auto x = gather_standardized(m, rows, &s);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          result.scores[offset + rows[i]] =
              kern.dot(x.data() + i * dim, model.weights.data(), dim) + model.intercept;
        }
      };
      score(a, test_a, 0);
      score(b, test_b, a.rows);
    }
  });
  result.auc = rank_auc(result.scores, result.labels);
  return result;
}

SimilarityResult compute_similarity(const EmbeddingMatrix& trn, const EmbeddingMatrix& syn,
                                    const EmbeddingMatrix* hol,
                                    const DiscriminatorOptions& options) {
  SimilarityResult result;
  const auto c_trn = centroid(trn);
  const auto c_syn = centroid(syn);
  result.cosine_similarity_training_synthetic = cosine_similarity(c_trn, c_syn);
  auto syn_auc = discriminator_auc(trn, syn, options);
  result.discriminator_auc_training_synthetic = syn_auc.auc;
  for (auto& w : syn_auc.warnings) result.warnings.push_back("trn vs syn: " + w);

  std::vector<const EmbeddingMatrix*> sets{&trn, &syn};
  if (hol != nullptr) {
    const auto c_hol = centroid(*hol);
    result.cosine_similarity_training_holdout = cosine_similarity(c_trn, c_hol);
    auto hol_auc = discriminator_auc(trn, *hol, options);
    result.discriminator_auc_training_holdout = hol_auc.auc;
    for (auto& w : hol_auc.warnings) result.warnings.push_back("trn vs hol: " + w);
    sets.push_back(hol);
  }
  result.pca = pca_project(sets);
  if (result.pca.rank_zero) {
    result.warnings.push_back("all embeddings are identical; the PCA projection is degenerate");
  }
  return result;
}

}  // namespace synthqa
