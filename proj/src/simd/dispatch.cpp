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

#include <atomic>
#include <string>

#include "synthqa/error.hpp"
#include "synthqa/simd/kernels.hpp"

namespace synthqa::simd {
namespace {

bool cpu_has_avx2() {
#if defined(SYNTHQA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa best_isa() { return is_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

std::atomic<const Kernels*>& active_slot() {
  static std::atomic<const Kernels*> slot{&kernels_for(best_isa())};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool is_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2: {
      static const bool supported = detail::avx2_kernels() != nullptr && cpu_has_avx2();
      return supported;
    }
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!is_supported(isa)) {
    throw Error("simd", std::string(isa_name(isa)) + " kernels are not available on this CPU");
  }
  return isa == Isa::kAvx2 ? *detail::avx2_kernels() : detail::scalar_kernels();
}

const Kernels& active() { return *active_slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

ScopedIsa::ScopedIsa(Isa isa) : previous_(active().isa) { set_active(isa); }

ScopedIsa::~ScopedIsa() { set_active(previous_); }

}  // namespace synthqa::simd
