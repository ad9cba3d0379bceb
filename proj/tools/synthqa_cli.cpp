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

// Command-line entry point: scores synthetic data against training (and
// optionally holdout) data and writes metrics.json and report.html.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "synthqa/error.hpp"
#include "synthqa/parallel.hpp"
#include "synthqa/pipeline.hpp"

namespace {

template <typename T>
void optional_flag(CLI::App& app, const std::string& name, std::optional<T>& target,
                   const std::string& help) {
  app.add_option_function<T>(name, [&target](const T& value) { target = value; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate synthetic tabular data against training and holdout data."};
  synthqa::RunConfig config;
  std::string encoder = "hashing";
  std::size_t threads = 0;

  app.add_option("--syn-tgt", config.syn_tgt, "Synthetic target CSV")->required();
  app.add_option("--trn-tgt", config.trn_tgt, "Training target CSV")->required();
  optional_flag(app, "--hol-tgt", config.hol_tgt, "Holdout target CSV");
  optional_flag(app, "--syn-ctx", config.syn_ctx, "Synthetic context CSV");
  optional_flag(app, "--trn-ctx", config.trn_ctx, "Training context CSV");
  optional_flag(app, "--hol-ctx", config.hol_ctx, "Holdout context CSV");
  optional_flag(app, "--ctx-primary-key", config.ctx_primary_key, "Primary key of context data");
  optional_flag(app, "--tgt-context-key", config.tgt_context_key,
                "Target column referencing the context primary key");
  optional_flag(app, "--sequence-key", config.sequence_key,
                "Subject column; enables sequential scoring");
  optional_flag(app, "--schema-hints", config.schema_hints,
                "File of column=kind lines overriding type inference");
  app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
  app.add_option("--encoder", encoder, "hashing or external:CMD")->capture_default_str();
  app.add_option("--out", config.output_dir, "Output directory")->required();
  app.add_option("--folds", config.folds, "Discriminator cross-validation folds")
      ->capture_default_str();
  app.add_option("--truncation", config.truncation, "Record string limit in characters")
      ->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (0 = logical CPUs)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    config.encoder = synthqa::EncoderSpec::parse(encoder);
    synthqa::set_worker_count(threads);
    const auto outputs = synthqa::run(config);
    std::cout << synthqa::summary_table(outputs.metrics);
    for (const auto& w : outputs.metrics.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << outputs.metrics_path << " and " << outputs.report_path << '\n';
    return 0;
  } catch (const synthqa::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
