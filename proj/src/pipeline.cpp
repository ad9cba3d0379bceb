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

#include "synthqa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "synthqa/accuracy.hpp"
#include "synthqa/datamodel.hpp"
#include "synthqa/distances.hpp"
#include "synthqa/error.hpp"
#include "synthqa/similarity.hpp"

namespace synthqa {
namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("cli", message); }

SchemaHints hints_from(const Dataset& reference, const SchemaHints& user) {
  SchemaHints hints = user;
  for (const auto& column : reference.columns()) hints.emplace(column.name(), column.kind());
  return hints;
}

std::optional<Dataset> load_optional(const std::optional<std::string>& path, Role role,
                                     const SchemaHints& hints, std::vector<std::string>& warnings) {
  if (!path) return std::nullopt;
  return load_dataset(*path, role, hints, &warnings);
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.syn_tgt.empty() || config.trn_tgt.empty()) fail("--syn-tgt and --trn-tgt are required");
  if (config.output_dir.empty()) fail("--out is required");
  if (config.folds == 0) fail("--folds must be positive");
  if (config.truncation == 0) fail("--truncation must be positive");
  const bool any_ctx = config.syn_ctx || config.trn_ctx || config.hol_ctx;
  if (any_ctx) {
    if (!config.syn_ctx || !config.trn_ctx) fail("context needs both --syn-ctx and --trn-ctx");
    if (config.hol_tgt.has_value() != config.hol_ctx.has_value()) {
      fail("--hol-ctx must be given together with --hol-tgt when context is used");
    }
    if (!config.ctx_primary_key || !config.tgt_context_key) {
      fail("context files need --ctx-primary-key and --tgt-context-key");
    }
    if (config.sequence_key && *config.sequence_key != *config.tgt_context_key) {
      fail("--sequence-key must match --tgt-context-key when context is used");
    }
  } else if (config.ctx_primary_key || config.tgt_context_key) {
    fail("--ctx-primary-key and --tgt-context-key need context files");
  }
}

RunOutputs run(const RunConfig& config) {
  validate(config);
  std::vector<std::string> warnings;
  const SchemaHints user_hints =
      config.schema_hints ? read_schema_hints(*config.schema_hints) : SchemaHints{};

  // Training types decide how the other roles are read.
  Dataset trn = load_dataset(config.trn_tgt, Role::kTraining, user_hints, &warnings);
  const SchemaHints tgt_hints = hints_from(trn, user_hints);
  Dataset syn = load_dataset(config.syn_tgt, Role::kSynthetic, tgt_hints, &warnings);
  std::optional<Dataset> hol = load_optional(config.hol_tgt, Role::kHoldout, tgt_hints, warnings);

  std::optional<std::string> sequence_key = config.sequence_key;
  if (config.trn_ctx) {
    const ContextJoin join{*config.ctx_primary_key, *config.tgt_context_key};
    const Dataset trn_ctx = load_dataset(*config.trn_ctx, Role::kTraining, user_hints, &warnings);
    const SchemaHints ctx_hints = hints_from(trn_ctx, user_hints);
    const Dataset syn_ctx = load_dataset(*config.syn_ctx, Role::kSynthetic, ctx_hints, &warnings);
    trn = join_context(trn, trn_ctx, join);
    syn = join_context(syn, syn_ctx, join);
    if (hol) {
      hol = join_context(*hol, load_dataset(*config.hol_ctx, Role::kHoldout, ctx_hints, &warnings),
                         join);
    }
    sequence_key = config.tgt_context_key;
  }

  bool sequential = false;
  if (sequence_key) {
    trn = trn.with_sequence_key(sequence_key);
    syn = syn.with_sequence_key(sequence_key);
    if (hol) hol = hol->with_sequence_key(sequence_key);
    const auto subjects = trn.subjects();
    sequential = std::any_of(subjects.begin(), subjects.end(),
                             [](const Subject& s) { return s.rows.size() >= 2; });
    if (!sequential) {
      warnings.push_back("no training subject has two or more events; scoring as flat data");
    }
  }

  const ColumnAlignment alignment = align_columns(trn, syn, hol ? &*hol : nullptr);
  warnings.insert(warnings.end(), alignment.warnings.begin(), alignment.warnings.end());
  trn = conform(trn, alignment, &warnings);
  syn = conform(syn, alignment, &warnings);
  if (hol) hol = conform(*hol, alignment, &warnings);

  std::vector<std::string> columns;
  RunEcho echo;
  for (const auto& c : alignment.columns) {
    if (sequence_key && c.name == *sequence_key) continue;
    columns.push_back(c.name);
    echo.columns.push_back({c.name, c.kind, c.from_context});
  }
  if (columns.empty()) fail("no column is left to score besides the sequence key");

  // Accuracy.
  const auto specs = fit_column_specs(trn, sequential);
  const AccuracyResult accuracy =
      compute_accuracy(trn, syn, specs, AccuracyOptions{sequential, config.seed});
  warnings.insert(warnings.end(), accuracy.warnings.begin(), accuracy.warnings.end());

  // Embeddings.
  auto encode = [&](const Dataset& d) {
    const auto strings = serialize_dataset(d, columns, sequential, config.truncation);
    EmbeddingMatrix m = embed(strings, config.encoder, d.role());
    if (!m.flagged_rows.empty()) {
      warnings.push_back(std::string(role_tag(d.role())) + ": " +
                         std::to_string(m.flagged_rows.size()) +
                         " record(s) embedded as the zero vector were replaced by e0");
    }
    return m;
  };
  const EmbeddingMatrix x_trn = encode(trn);
  const EmbeddingMatrix x_syn = encode(syn);
  std::optional<EmbeddingMatrix> x_hol;
  if (hol) x_hol = encode(*hol);
  const EmbeddingMatrix* x_hol_ptr = x_hol ? &*x_hol : nullptr;

  DiscriminatorOptions discriminator;
  discriminator.folds = config.folds;
  discriminator.seed = config.seed;
  const SimilarityResult similarity = compute_similarity(x_trn, x_syn, x_hol_ptr, discriminator);
  warnings.insert(warnings.end(), similarity.warnings.begin(), similarity.warnings.end());

  DistancesResult distances = dcr_metrics(x_syn, x_trn, x_hol_ptr, config.seed);
  distances.ims_training = identical_match_share(syn, trn, columns, sequential);
  if (hol) distances.ims_holdout = identical_match_share(syn, *hol, columns, sequential);
  warnings.insert(warnings.end(), distances.warnings.begin(), distances.warnings.end());
  if (distances.dcr_share) {
    const double bound = 0.5 + 2.0 * std::sqrt(0.25 / static_cast<double>(x_syn.rows));
    if (*distances.dcr_share > bound) {
      warnings.push_back("dcr_share is above 0.5 by more than two standard errors; synthetic "
                         "records sit closer to training than holdout records do");
    }
  }

  echo.seed = config.seed;
  echo.encoder = config.encoder.to_string();
  echo.folds = config.folds;
  echo.truncation = config.truncation;
  echo.sequential = sequential;
  echo.sequence_key = sequence_key;
  echo.trn_samples = x_trn.rows;
  echo.syn_samples = x_syn.rows;
  if (x_hol) echo.hol_samples = x_hol->rows;

  RunOutputs outputs;
  outputs.metrics = assemble_metrics(accuracy, similarity, distances, echo, warnings);
  ReportInputs inputs;
  inputs.metrics = &outputs.metrics;
  inputs.accuracy = &accuracy;
  inputs.similarity = &similarity;
  inputs.distances = &distances;
  inputs.specs = specs;
  const std::string metrics_text = serialize_metrics(outputs.metrics);
  const std::string html = render_html(inputs);

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) fail("cannot create output directory '" + config.output_dir + "'");
  const std::filesystem::path dir(config.output_dir);
  outputs.metrics_path = (dir / "metrics.json").string();
  outputs.report_path = (dir / "report.html").string();
  write_file_atomic(outputs.metrics_path, metrics_text);
  write_file_atomic(outputs.report_path, html);
  return outputs;
}

}  // namespace synthqa
