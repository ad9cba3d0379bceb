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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "synthqa/error.hpp"
#include "synthqa/pipeline.hpp"
#include "test_support.hpp"

namespace synthqa {
namespace {

using nlohmann::json;
using testing::TempDir;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Subjects with a static attribute and 2 to 5 events of (step, kind).
struct SequentialFiles {
  std::string ctx;
  std::string tgt;
};

SequentialFiles sequential_csv(std::size_t subjects, std::uint64_t seed, std::size_t id_offset) {
  std::mt19937_64 rng(seed);
  const char* kinds[] = {"view", "cart", "buy"};
  std::ostringstream ctx, tgt;
  ctx << "id,segment\n";
  tgt << "user,step,kind\n";
  for (std::size_t s = 0; s < subjects; ++s) {
    const std::size_t id = s + id_offset;
    ctx << id << ',' << (rng() % 2 ? "retail" : "pro") << '\n';
    const std::size_t events = 2 + rng() % 4;
    for (std::size_t e = 0; e < events; ++e) {
      tgt << id << ',' << e << ',' << kinds[rng() % 3] << '\n';
    }
  }
  return {ctx.str(), tgt.str()};
}

int run_cli(const std::string& args) {
  const std::string command = std::string(SYNTHQA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig minimal(const TempDir& dir) {
  RunConfig c;
  c.trn_tgt = dir.file("trn.csv");
  c.syn_tgt = dir.file("syn.csv");
  c.output_dir = dir.file("out");
  return c;
}

TEST(ValidateTest, RejectsInconsistentContextArguments) {
  RunConfig c;
  c.trn_tgt = "t.csv";
  c.syn_tgt = "s.csv";
  c.output_dir = "o";
  EXPECT_NO_THROW(validate(c));

  auto with = [&](auto mutate) {
    RunConfig x = c;
    mutate(x);
    return x;
  };
  EXPECT_THROW(validate(with([](RunConfig& x) { x.trn_ctx = "c.csv"; })), Error);
  EXPECT_THROW(validate(with([](RunConfig& x) {
                 x.trn_ctx = "c.csv";
                 x.syn_ctx = "d.csv";
               })),
               Error);
  EXPECT_THROW(validate(with([](RunConfig& x) { x.ctx_primary_key = "id"; })), Error);
  EXPECT_THROW(validate(with([](RunConfig& x) {
                 x.trn_ctx = "c.csv";
                 x.syn_ctx = "d.csv";
                 x.ctx_primary_key = "id";
                 x.tgt_context_key = "user";
                 x.hol_tgt = "h.csv";
               })),
               Error);
  EXPECT_THROW(validate(with([](RunConfig& x) {
                 x.trn_ctx = "c.csv";
                 x.syn_ctx = "d.csv";
                 x.ctx_primary_key = "id";
                 x.tgt_context_key = "user";
                 x.sequence_key = "other";
               })),
               Error);
  EXPECT_NO_THROW(validate(with([](RunConfig& x) {
    x.trn_ctx = "c.csv";
    x.syn_ctx = "d.csv";
    x.ctx_primary_key = "id";
    x.tgt_context_key = "user";
  })));
  EXPECT_THROW(validate(with([](RunConfig& x) { x.folds = 0; })), Error);
}

TEST(RunTest, CopiedTrainingScoresPerfectly) {
  TempDir dir;
  const std::string data = "a,b,c\n1,x,2.5\n2,y,3.5\n3,x,\n4,z,1.0\n5,y,0.5\n6,x,9.0\n";
  write_text(dir.file("trn.csv"), data);
  write_text(dir.file("syn.csv"), data);
  const auto out = run(minimal(dir));
  EXPECT_EQ(out.metrics.overall, 1.0);
  EXPECT_EQ(out.metrics.ims_training, 1.0);
  EXPECT_EQ(out.metrics.dcr_training, 0.0);
  EXPECT_NEAR(out.metrics.cosine_similarity_training_synthetic, 1.0, 1e-12);
  EXPECT_TRUE(std::filesystem::exists(out.metrics_path));
  EXPECT_TRUE(std::filesystem::exists(out.report_path));
}

TEST(RunTest, FailedRunWritesNothing) {
  TempDir dir;
  write_text(dir.file("trn.csv"), "a\n1\n2\n3\n");
  RunConfig c = minimal(dir);
  c.syn_tgt = dir.file("missing.csv");
  EXPECT_THROW(run(c), Error);
  EXPECT_FALSE(std::filesystem::exists(dir.file("out/metrics.json")));
}

TEST(RunTest, SingleEventSubjectsFallBackToFlat) {
  TempDir dir;
  write_text(dir.file("trn.csv"), "sid,v\n1,a\n2,b\n3,a\n4,c\n");
  write_text(dir.file("syn.csv"), "sid,v\n5,a\n6,b\n7,b\n");
  RunConfig c = minimal(dir);
  c.sequence_key = "sid";
  const auto out = run(c);
  EXPECT_FALSE(out.metrics.config.sequential);
  EXPECT_FALSE(out.metrics.coherence.has_value());
  bool warned = false;
  for (const auto& w : out.metrics.warnings) warned |= w.find("flat") != std::string::npos;
  EXPECT_TRUE(warned);
}

TEST(RunTest, ContextAndSequenceRun) {
  TempDir dir;
  const auto trn = sequential_csv(60, 1, 0);
  const auto syn = sequential_csv(60, 2, 1000);
  const auto hol = sequential_csv(60, 3, 2000);
  write_text(dir.file("trn_ctx.csv"), trn.ctx);
  write_text(dir.file("trn.csv"), trn.tgt);
  write_text(dir.file("syn_ctx.csv"), syn.ctx);
  write_text(dir.file("syn.csv"), syn.tgt);
  write_text(dir.file("hol_ctx.csv"), hol.ctx);
  write_text(dir.file("hol.csv"), hol.tgt);
  RunConfig c = minimal(dir);
  c.hol_tgt = dir.file("hol.csv");
  c.trn_ctx = dir.file("trn_ctx.csv");
  c.syn_ctx = dir.file("syn_ctx.csv");
  c.hol_ctx = dir.file("hol_ctx.csv");
  c.ctx_primary_key = "id";
  c.tgt_context_key = "user";
  const auto out = run(c);
  const auto& m = out.metrics;
  EXPECT_TRUE(m.config.sequential);
  EXPECT_EQ(m.config.sequence_key, "user");
  EXPECT_EQ(m.config.trn_samples, 60u);
  ASSERT_TRUE(m.coherence.has_value());
  EXPECT_EQ(m.coherence_by_column.size(), 2u);
  EXPECT_EQ(m.univariate_by_column.size(), 3u);
  EXPECT_TRUE(m.univariate_by_column.count("ctx.segment"));
  // Targets against each other plus the context column against each target.
  EXPECT_EQ(m.bivariate_by_pair.size(), 1u + 2u);
  EXPECT_TRUE(m.dcr_share.has_value());
  EXPECT_GT(m.overall, 0.7);
  const json j = json::parse(read_file(out.metrics_path));
  EXPECT_FALSE(j["accuracy"]["coherence"].is_null());
}

TEST(CliTest, ExitCodes) {
  TempDir dir;
  write_text(dir.file("trn.csv"), "a,b\n1,x\n2,y\n3,x\n4,y\n");
  write_text(dir.file("syn.csv"), "a,b\n1,y\n2,y\n3,x\n5,y\n");
  const std::string base = "--trn-tgt " + dir.file("trn.csv") + " --syn-tgt " + dir.file("syn.csv");
  EXPECT_EQ(run_cli(base + " --out " + dir.file("ok")), 0);
  EXPECT_TRUE(std::filesystem::exists(dir.file("ok/metrics.json")));
  EXPECT_TRUE(std::filesystem::exists(dir.file("ok/report.html")));
  EXPECT_EQ(run_cli(base + " --out " + dir.file("bad") + " --ctx-primary-key id"), 2);
  EXPECT_EQ(run_cli(base + " --out " + dir.file("bad") + " --encoder nonsense"), 2);
  EXPECT_NE(run_cli("--trn-tgt x.csv"), 0);
  EXPECT_FALSE(std::filesystem::exists(dir.file("bad")));
}

}  // namespace
}  // namespace synthqa
