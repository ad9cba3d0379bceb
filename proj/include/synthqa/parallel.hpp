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
#include <functional>

namespace synthqa {

// Number of worker threads used by parallel_for. Defaults to the number of
// logical CPUs; 0 restores the default.
void set_worker_count(std::size_t workers);
std::size_t worker_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are disjoint,
// so callers that write only to their own slots get identical results for any
// worker count. Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace synthqa
