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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "synthqa/error.hpp"
#include "synthqa/pipeline.hpp"
#include "synthqa/report.hpp"
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

// Three-column flat table: numeric, categorical, numeric.
std::string flat_csv(std::size_t rows, std::uint64_t seed, double shift = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const char* colors[] = {"red", "green", "blue", "black"};
  std::ostringstream out;
  out << "age,color,income\n";
  for (std::size_t i = 0; i < rows; ++i) {
    out << static_cast<int>(40 + 10 * normal(rng) + shift) << ',' << colors[rng() % 4] << ','
        << 1000.0 * std::exp(normal(rng)) << '\n';
  }
  return out.str();
}

class FlatRunTest : public ::testing::Test {
 protected:
  void SetUp() override {
    write_text(dir_.file("trn.csv"), flat_csv(300, 1));
    write_text(dir_.file("syn.csv"), flat_csv(300, 2, 3.0));
    write_text(dir_.file("hol.csv"), flat_csv(300, 3));
  }
  RunConfig config(bool holdout, const std::string& out = "out") const {
    RunConfig c;
    c.trn_tgt = dir_.file("trn.csv");
    c.syn_tgt = dir_.file("syn.csv");
    if (holdout) c.hol_tgt = dir_.file("hol.csv");
    c.output_dir = dir_.file(out);
    return c;
  }
  TempDir dir_;
};

TEST_F(FlatRunTest, NoHoldoutWritesNullsForHoldoutFields) {
  const auto out = run(config(false));
  const json j = json::parse(read_file(out.metrics_path));
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_TRUE(j["similarity"]["cosine_similarity_training_holdout"].is_null());
  EXPECT_TRUE(j["similarity"]["discriminator_auc_training_holdout"].is_null());
  EXPECT_TRUE(j["distances"]["ims_holdout"].is_null());
  EXPECT_TRUE(j["distances"]["dcr_holdout"].is_null());
  EXPECT_TRUE(j["distances"]["dcr_share"].is_null());
  EXPECT_TRUE(j["config"]["samples"]["hol"].is_null());
}

TEST_F(FlatRunTest, FlatRunHasNoCoherence) {
  const auto out = run(config(true));
  const json j = json::parse(read_file(out.metrics_path));
  EXPECT_TRUE(j["accuracy"]["coherence"].is_null());
  EXPECT_TRUE(j["accuracy"]["coherence_max"].is_null());
  EXPECT_TRUE(j["details"]["coherence"].empty());
  EXPECT_EQ(j["details"]["univariate"].size(), 3u);
  EXPECT_EQ(j["details"]["bivariate"].size(), 3u);
  EXPECT_FALSE(j["distances"]["dcr_share"].is_null());
}

TEST_F(FlatRunTest, NumbersHaveAtMostFourDecimals) {
  const auto out = run(config(true));
  const json j = json::parse(read_file(out.metrics_path));
  for (const char* section : {"accuracy", "similarity", "distances"}) {
    for (const auto& [key, value] : j[section].items()) {
      if (!value.is_number()) continue;
      const double x = value.get<double>();
      EXPECT_NEAR(x * 1e4, std::round(x * 1e4), 1e-6) << key;
    }
  }
}

TEST_F(FlatRunTest, MetricsRoundTripThroughJson) {
  const auto out = run(config(true));
  const std::string text = read_file(out.metrics_path);
  const MetricsDocument doc = metrics_from_json(json::parse(text));
  EXPECT_EQ(serialize_metrics(doc), text);
  EXPECT_EQ(metrics_from_json(to_json(doc)), doc);
}

TEST_F(FlatRunTest, ReportIsSelfContained) {
  const auto out = run(config(true));
  const std::string html = read_file(out.report_path);
  EXPECT_EQ(html.find("http://"), std::string::npos);
  EXPECT_EQ(html.find("https://"), std::string::npos);
  EXPECT_EQ(html.find("<link"), std::string::npos);
  EXPECT_EQ(html.find("src="), std::string::npos);
  EXPECT_NE(html.find("id=\"binning-specs\""), std::string::npos);
}

TEST_F(FlatRunTest, ReportHasOneChartPerItem) {
  const auto out = run(config(true));
  const std::string html = read_file(out.report_path);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = html.find(needle); pos != std::string::npos; pos = html.find(needle, pos + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count("<figure class=\"chart\""), 3u + 3u + 1u + 1u);
  EXPECT_EQ(count("data-kind=\"univariate\""), 3u);
  EXPECT_EQ(count("data-kind=\"bivariate\""), 3u);
  EXPECT_EQ(count("data-kind=\"coherence\""), 0u);
  EXPECT_EQ(count("data-kind=\"pca\""), 1u);
  EXPECT_EQ(count("data-kind=\"dcr\""), 1u);
}

TEST_F(FlatRunTest, RepeatedRunsAreByteIdentical) {
  const auto a = run(config(true, "a"));
  const auto b = run(config(true, "b"));
  EXPECT_EQ(read_file(a.metrics_path), read_file(b.metrics_path));
  EXPECT_EQ(read_file(a.report_path), read_file(b.report_path));
}

TEST_F(FlatRunTest, EmbeddedBinningSpecsParse) {
  const auto out = run(config(false));
  const std::string html = read_file(out.report_path);
  const std::string open = "<script type=\"application/json\" id=\"binning-specs\">";
  const auto begin = html.find(open) + open.size();
  const auto end = html.find("</script>", begin);
  const json specs = json::parse(html.substr(begin, end - begin));
  EXPECT_EQ(specs.size(), 3u);
}

TEST(ThinQuantilesTest, ShortArraysUnchanged) {
  const std::vector<double> v{1, 2, 3};
  EXPECT_EQ(thin_quantiles(v, 5, 2), v);
}

TEST(ThinQuantilesTest, LongArraysThinToEvenQuantiles) {
  std::vector<double> v(10001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  const auto t = thin_quantiles(v, kCdfThinThreshold, kCdfThinPoints);
  ASSERT_EQ(t.size(), kCdfThinPoints);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 10000.0);
  EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
}

TEST(WriteFileAtomicTest, ReplacesContent) {
  TempDir dir;
  const std::string path = dir.file("x.txt");
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(write_file_atomic(dir.file("missing/x.txt"), "y"), Error);
}

TEST(SummaryTableTest, ListsHeadlineMetrics) {
  MetricsDocument doc;
  doc.overall = 0.91234;
  const std::string table = summary_table(doc);
  EXPECT_NE(table.find("overall"), std::string::npos);
  EXPECT_NE(table.find("0.9123"), std::string::npos);
  EXPECT_NE(table.find("dcr_share"), std::string::npos);
}

}  // namespace
}  // namespace synthqa
