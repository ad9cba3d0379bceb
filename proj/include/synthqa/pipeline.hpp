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
#include <string>
#include <vector>

#include "synthqa/embedding.hpp"
#include "synthqa/report.hpp"

namespace synthqa {

struct RunConfig {
  std::string syn_tgt;
  std::string trn_tgt;
  std::optional<std::string> hol_tgt;
  std::optional<std::string> syn_ctx;
  std::optional<std::string> trn_ctx;
  std::optional<std::string> hol_ctx;
  std::optional<std::string> ctx_primary_key;
  std::optional<std::string> tgt_context_key;
  std::optional<std::string> sequence_key;
  std::optional<std::string> schema_hints;  // path
  std::uint64_t seed = 42;
  EncoderSpec encoder;
  std::string output_dir;
  std::size_t truncation = kDefaultTruncation;
  std::size_t folds = 5;
};

// Throws Error("cli", ...) when context files are not given all-or-none per
// role or when keys and context files do not come together.
void validate(const RunConfig& config);

struct RunOutputs {
  MetricsDocument metrics;
  std::string metrics_path;
  std::string report_path;
};

// Loads, scores and writes metrics.json and report.html into the output
// directory. Nothing is written unless every stage succeeds.
RunOutputs run(const RunConfig& config);

}  // namespace synthqa
