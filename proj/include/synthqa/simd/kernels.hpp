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
#include <string_view>

// Dense double-precision kernels used by the nearest-neighbour search, the
// logistic discriminator and the encoders. Each kernel exists as a scalar
// reference implementation and as an AVX2/FMA variant; the variant is picked
// at runtime from the CPU features.
namespace synthqa::simd {

enum class Isa { kScalar, kAvx2 };

struct Kernels {
  Isa isa;
  // sum_k a[k] * b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_k (a[k] - b[k])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[j] = squared_distance(query, refs + j * dim, dim) for j < n_refs;
  // refs is row-major.
  void (*squared_distances)(const double* query, const double* refs,
                            std::size_t n_refs, std::size_t dim, double* out);
  // out[i * n_refs + j] = dot(queries + i * dim, refs + j * dim, dim); both
  // inputs are row-major.
  void (*dot_block)(const double* queries, std::size_t n_queries, const double* refs,
                    std::size_t n_refs, std::size_t dim, double* out);
};

std::string_view isa_name(Isa isa);

bool is_supported(Isa isa);

// Throws synthqa::Error if the CPU cannot run the requested variant.
const Kernels& kernels_for(Isa isa);

// The kernel table used by the library. Starts as the widest supported ISA.
const Kernels& active();

// Overrides the runtime choice (benchmarks and equivalence tests).
void set_active(Isa isa);

// Restores the previous selection on scope exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

namespace detail {
const Kernels& scalar_kernels();
const Kernels* avx2_kernels();  // nullptr when not compiled in
}  // namespace detail

}  // namespace synthqa::simd
