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

// Scalar reference kernels. Plain left-to-right accumulation; the results of
// these loops are what the SIMD variants are tested against.

#include "synthqa/simd/kernels.hpp"

namespace synthqa::simd::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void squared_distances_scalar(const double* query, const double* refs,
                              std::size_t n_refs, std::size_t dim, double* out) {
  for (std::size_t j = 0; j < n_refs; ++j) {
    out[j] = squared_distance_scalar(query, refs + j * dim, dim);
  }
}

void dot_block_scalar(const double* queries, std::size_t n_queries, const double* refs,
                      std::size_t n_refs, std::size_t dim, double* out) {
  for (std::size_t i = 0; i < n_queries; ++i) {
    for (std::size_t j = 0; j < n_refs; ++j) {
      out[i * n_refs + j] = dot_scalar(queries + i * dim, refs + j * dim, dim);
    }
  }
}

const Kernels kScalar{Isa::kScalar, dot_scalar, squared_distance_scalar,
                      axpy_scalar, squared_distances_scalar, dot_block_scalar};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

}  // namespace synthqa::simd::detail
