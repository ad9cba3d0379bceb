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

#include "synthqa/distances.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "synthqa/error.hpp"
#include "synthqa/parallel.hpp"
#include "synthqa/random.hpp"
#include "synthqa/simd/kernels.hpp"

namespace synthqa {
namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("distances", message); }

constexpr std::size_t kQueryBlock = 32;
constexpr std::size_t kReferenceTile = 60;

// Floor on the screening tolerance for large squared distances.
double refinement_slack(double squared) { return 1e-10 * std::max(1.0, squared); }

double mean(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

EmbeddingMatrix take_rows(const EmbeddingMatrix& m, std::span<const std::size_t> rows) {
  EmbeddingMatrix out;
  out.provenance = m.provenance;
  out.rows = rows.size();
  out.data.resize(rows.size() * EmbeddingMatrix::dims);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(m.row(rows[i]), EmbeddingMatrix::dims, out.row(i));
  }
  return out;
}

void append_cell(std::string& key, const Column& column, std::size_t row) {
  if (column.is_missing(row)) {
    key.push_back('\0');
    return;
  }
  const std::string text = column.format(row);
  key.push_back('\1');
  key += std::to_string(text.size());
  key.push_back(':');
  key += text;
}

std::vector<std::string> sample_keys(const Dataset& dataset, std::span<const std::string> columns,
                                     bool sequential) {
  std::vector<const Column*> context, target;
  for (const auto& name : columns) {
    const Column& column = dataset.column(name);
    (column.from_context() ? context : target).push_back(&column);
  }
  std::vector<std::string> keys;
  if (sequential) {
    for (const auto& subject : dataset.subjects()) {
      std::string key;
      for (const Column* c : context) append_cell(key, *c, subject.rows.front());
      for (std::size_t row : subject.rows) {
        key.push_back('\2');
        for (const Column* c : target) append_cell(key, *c, row);
      }
      keys.push_back(std::move(key));
    }
  } else {
    keys.reserve(dataset.n_rows());
    for (std::size_t row = 0; row < dataset.n_rows(); ++row) {
      std::string key;
      for (const Column* c : context) append_cell(key, *c, row);
      for (const Column* c : target) append_cell(key, *c, row);
      keys.push_back(std::move(key));
    }
  }
  return keys;
}

}  // namespace

double canonical_distance(const double* a, const double* b, std::size_t dim) {
  return std::sqrt(simd::detail::scalar_kernels().squared_distance(a, b, dim));
}

double nearest_distance(std::span<const double> query, const EmbeddingMatrix& reference) {
  if (reference.rows == 0) fail("nearest distance against an empty reference");
  if (query.size() != EmbeddingMatrix::dims) fail("query has the wrong dimension");
  EmbeddingMatrix q;
  q.rows = 1;
  q.data.assign(query.begin(), query.end());
  return nearest_distances(q, reference).front();
}

std::vector<double> nearest_distances(const EmbeddingMatrix& query,
                                      const EmbeddingMatrix& reference) {
  if (reference.rows == 0) fail("nearest distance against an empty reference");
  const std::size_t dim = EmbeddingMatrix::dims;
  std::vector<double> out(query.rows);
  const std::size_t n_blocks = (query.rows + kQueryBlock - 1) / kQueryBlock;

  // The screening pass estimates |q - r|^2 as |q|^2 + |r|^2 - 2 q.r; its
  // rounding error is bounded by a multiple of dim * eps * (|q|^2 + |r|^2).
  std::vector<double> ref_norms(reference.rows);
  double max_ref_norm = 0.0;
  {
    const auto& kern = simd::active();
    for (std::size_t r = 0; r < reference.rows; ++r) {
      ref_norms[r] = kern.dot(reference.row(r), reference.row(r), dim);
      max_ref_norm = std::max(max_ref_norm, ref_norms[r]);
    }
  }
  const double expansion_factor = 4.0 * static_cast<double>(dim + 3) * DBL_EPSILON;

  parallel_for(n_blocks, 1, [&](std::size_t begin, std::size_t end) {
    const auto& kern = simd::active();
    std::vector<double> tile(kQueryBlock * kReferenceTile);
    std::vector<double> best(kQueryBlock), slack(kQueryBlock), norms(kQueryBlock);
    std::vector<std::vector<std::size_t>> candidates(kQueryBlock);
    for (std::size_t block = begin; block < end; ++block) {
      const std::size_t q0 = block * kQueryBlock;
      const std::size_t nq = std::min(query.rows, q0 + kQueryBlock) - q0;
      for (std::size_t i = 0; i < nq; ++i) {
        best[i] = INFINITY;
        candidates[i].clear();
        norms[i] = kern.dot(query.row(q0 + i), query.row(q0 + i), dim);
        slack[i] = expansion_factor * (norms[i] + max_ref_norm);
      }
      for (std::size_t r0 = 0; r0 < reference.rows; r0 += kReferenceTile) {
        const std::size_t nr = std::min(reference.rows, r0 + kReferenceTile) - r0;
        kern.dot_block(query.row(q0), nq, reference.row(r0), nr, dim, tile.data());
        for (std::size_t i = 0; i < nq; ++i) {
          double& b = best[i];
          auto& cand = candidates[i];
          const double* g = tile.data() + i * nr;
          for (std::size_t j = 0; j < nr; ++j) {
            const double d = norms[i] + ref_norms[r0 + j] - 2.0 * g[j];
            const double s = slack[i] + refinement_slack(b);
            if (d < b - s) {
              b = d;
              cand.clear();
              cand.push_back(r0 + j);
            } else if (d <= b + s) {
              b = std::min(b, d);
              cand.push_back(r0 + j);
            }
          }
        }
      }
      for (std::size_t i = 0; i < nq; ++i) {
        double exact = INFINITY;
        for (std::size_t r : candidates[i]) {
          exact = std::min(exact, canonical_distance(query.row(q0 + i), reference.row(r), dim));
        }
        out[q0 + i] = exact;
      }
    }
  });
  return out;
}

std::vector<std::size_t> subsample_rows(std::size_t n, std::size_t keep, std::uint64_t seed) {
  if (keep > n) fail("cannot keep more rows than exist");
  random::SplitMix64 rng(seed, random::fnv1a64("dcr-subsample") ^ n);
  auto order = random::permutation(n, rng);
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

DistancesResult dcr_metrics(const EmbeddingMatrix& syn, const EmbeddingMatrix& trn,
                            const EmbeddingMatrix* hol, std::uint64_t seed) {
  if (syn.rows == 0) fail("synthetic embeddings are empty");
  if (trn.rows == 0) fail("training embeddings are empty");
  DistancesResult result;

  if (hol == nullptr) {
    result.reference_rows = trn.rows;
    result.dcr_cdf_training = nearest_distances(syn, trn);
    result.dcr_training = mean(result.dcr_cdf_training);
    std::sort(result.dcr_cdf_training.begin(), result.dcr_cdf_training.end());
    return result;
  }
  if (hol->rows == 0) fail("holdout embeddings are empty");

  const std::size_t keep = std::min(trn.rows, hol->rows);
  result.reference_rows = keep;
  EmbeddingMatrix trn_cut, hol_cut;
  const EmbeddingMatrix* trn_ref = &trn;
  const EmbeddingMatrix* hol_ref = hol;
  if (trn.rows > keep) {
    trn_cut = take_rows(trn, subsample_rows(trn.rows, keep, seed));
    trn_ref = &trn_cut;
    result.warnings.push_back("trn subsampled to " + std::to_string(keep) +
                              " rows to match hol for distance metrics");
  } else if (hol->rows > keep) {
    hol_cut = take_rows(*hol, subsample_rows(hol->rows, keep, seed));
    hol_ref = &hol_cut;
    result.warnings.push_back("hol subsampled to " + std::to_string(keep) +
                              " rows to match trn for distance metrics");
  }

  const auto d_trn = nearest_distances(syn, *trn_ref);
  const auto d_hol = nearest_distances(syn, *hol_ref);
  double share = 0.0;
  for (std::size_t i = 0; i < syn.rows; ++i) {
    const double gap = d_trn[i] * d_trn[i] - d_hol[i] * d_hol[i];
    if (std::abs(gap) < kDcrTieTolerance) {
      share += 0.5;
    } else if (d_trn[i] < d_hol[i]) {
      share += 1.0;
    }
  }
  result.dcr_training = mean(d_trn);
  result.dcr_holdout = mean(d_hol);
  result.dcr_share = share / static_cast<double>(syn.rows);
  result.dcr_cdf_training = d_trn;
  result.dcr_cdf_holdout = d_hol;
  std::sort(result.dcr_cdf_training.begin(), result.dcr_cdf_training.end());
  std::sort(result.dcr_cdf_holdout.begin(), result.dcr_cdf_holdout.end());
  return result;
}

double identical_match_share(const Dataset& syn, const Dataset& reference,
                             std::span<const std::string> columns, bool sequential) {
  const auto syn_keys = sample_keys(syn, columns, sequential);
  if (syn_keys.empty()) fail("synthetic data has no samples");
  const auto ref_keys = sample_keys(reference, columns, sequential);
  const std::unordered_set<std::string> lookup(ref_keys.begin(), ref_keys.end());
  std::size_t matched = 0;
  for (const auto& key : syn_keys) matched += lookup.count(key);
  return static_cast<double>(matched) / static_cast<double>(syn_keys.size());
}

}  // namespace synthqa
