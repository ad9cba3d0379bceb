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
#include <random>

#include "synthqa/embedding.hpp"
#include "synthqa/error.hpp"
#include "synthqa/random.hpp"
#include "test_support.hpp"

namespace synthqa {
namespace {

using testing::make_dataset;

// Independent signed 3-gram hashing encoder.
std::vector<double> hashing_oracle(const std::string& s) {
  std::vector<double> v(kEmbeddingDims, 0.0);
  const std::string padded = std::string("\x02") + s + "\x03";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::uint64_t h = random::mix64(random::fnv1a64(padded.substr(i, 3)));
    v[h % kEmbeddingDims] += (h >> 63) ? -1.0 : 1.0;
  }
  double n = 0.0;
  for (double x : v) n += x * x;
  for (double& x : v) x /= std::sqrt(n);
  return v;
}

double cosine(const double* a, const double* b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < kEmbeddingDims; ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

TEST(SerializeRecordTest, FlatRowJoinsValues) {
  const Dataset d = make_dataset("a,b\n1,x\n,x\n");
  const std::vector<std::string> cols{"a", "b"};
  const std::size_t r0[] = {0};
  const std::size_t r1[] = {1};
  EXPECT_EQ(serialize_record(d, r0, cols), "1;x");
  EXPECT_EQ(serialize_record(d, r1, cols), ";x");
}

TEST(SerializeRecordTest, SequenceConcatenatesSteps) {
  const Dataset d = make_dataset("sid,a,b\ns,1,2\ns,3,4\n", Role::kTraining, "sid");
  const std::vector<std::string> cols{"a", "b"};
  const auto strings = serialize_dataset(d, cols, true);
  ASSERT_EQ(strings.size(), 1u);
  EXPECT_EQ(strings[0], "1;2;3;4");
}

TEST(SerializeRecordTest, ContextValuesLeadOnce) {
  const Dataset ctx = make_dataset("id,seg\n1,A\n");
  const Dataset tgt = make_dataset("uid,v\n1,5\n1,6\n");
  const Dataset d = join_context(tgt, ctx, {"id", "uid"}).with_sequence_key(std::string("uid"));
  const std::vector<std::string> cols{"v", "ctx.seg"};
  EXPECT_EQ(serialize_dataset(d, cols, true)[0], "A;5;6");
}

TEST(SerializeRecordTest, NumbersAndDatesUseCanonicalText) {
  const Dataset d = make_dataset("n,t\n0.10,2021-01-01T00:00:00\n");
  const std::vector<std::string> cols{"n", "t"};
  EXPECT_EQ(serialize_dataset(d, cols, false)[0], "0.1;2021-01-01");
}

TEST(SerializeRecordTest, TruncatesOnCodePoints) {
  EXPECT_EQ(truncate_code_points("abcdef", 4), "abcd");
  EXPECT_EQ(truncate_code_points("ab", 4), "ab");
  // "é" is two bytes and must not be split.
  EXPECT_EQ(truncate_code_points("a\xC3\xA9z", 2), "a\xC3\xA9");
  const Dataset d = make_dataset("sid,a\ns,12345\ns,67890\n", Role::kTraining, "sid");
  const std::vector<std::string> cols{"a"};
  EXPECT_EQ(serialize_dataset(d, cols, true, 8)[0], "12345;67");
}

TEST(EncoderSpecTest, ParsesAndPrints) {
  EXPECT_EQ(EncoderSpec::parse("hashing").kind, EncoderSpec::Kind::kHashing);
  const auto ext = EncoderSpec::parse("external:python3 enc.py");
  EXPECT_EQ(ext.kind, EncoderSpec::Kind::kExternal);
  EXPECT_EQ(ext.command, "python3 enc.py");
  EXPECT_EQ(EncoderSpec::parse(ext.to_string()), ext);
  EXPECT_THROW(EncoderSpec::parse("minilm"), Error);
  EXPECT_THROW(EncoderSpec::parse("external:"), Error);
}

TEST(HashingEncoderTest, DeterministicAndUnitNorm) {
  const std::vector<std::string> s{"1;x;2021-01-01", "1;x;2021-01-01", "hello"};
  const auto m = embed(s, {});
  const auto again = embed(s, {});
  EXPECT_EQ(m.data, again.data);
  for (std::size_t i = 0; i < kEmbeddingDims; ++i) EXPECT_EQ(m.row(0)[i], m.row(1)[i]);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double n = 0.0;
    for (std::size_t i = 0; i < kEmbeddingDims; ++i) n += m.row(r)[i] * m.row(r)[i];
    EXPECT_NEAR(std::sqrt(n), 1.0, 1e-9);
  }
  EXPECT_TRUE(m.flagged_rows.empty());
}

TEST(HashingEncoderTest, MatchesOracle) {
  const std::vector<std::string> s{"aaa", "zzz", "", "12.5;blue;", "ümlaut"};
  const auto m = embed(s, {});
  for (std::size_t r = 0; r < s.size(); ++r) {
    if (s[r].empty()) continue;
    const auto o = hashing_oracle(s[r]);
    for (std::size_t i = 0; i < kEmbeddingDims; ++i) EXPECT_EQ(m.row(r)[i], o[i]);
  }
}

TEST(HashingEncoderTest, DistinctTrigramsAreDissimilar) {
  const std::vector<std::string> s{"aaa", "zzz"};
  const auto m = embed(s, {});
  const auto a = hashing_oracle("aaa");
  const auto z = hashing_oracle("zzz");
  EXPECT_LT(cosine(a.data(), z.data()), 0.99);
  EXPECT_LT(cosine(m.row(0), m.row(1)), 0.99);
}

TEST(HashingEncoderTest, EmptyStringBecomesFlaggedBasisVector) {
  // The padded empty string has no 3-gram at all.
  const std::vector<std::string> s{"abc", ""};
  const auto m = embed(s, {});
  ASSERT_EQ(m.flagged_rows, std::vector<std::size_t>{1});
  EXPECT_EQ(m.row(1)[0], 1.0);
  for (std::size_t i = 1; i < kEmbeddingDims; ++i) EXPECT_EQ(m.row(1)[i], 0.0);
}

TEST(HashingEncoderTest, PreservesInputOrder) {
  std::vector<std::string> s;
  for (int i = 0; i < 600; ++i) s.push_back("row-" + std::to_string(i));
  const auto m = embed(s, {}, Role::kSynthetic);
  EXPECT_EQ(m.provenance, Role::kSynthetic);
  for (int i : {0, 17, 599}) {
    const std::vector<std::string> one{s[i]};
    const auto single = embed(one, {});
    for (std::size_t j = 0; j < kEmbeddingDims; ++j) EXPECT_EQ(m.row(i)[j], single.row(0)[j]);
  }
}

TEST(HashingEncoderTest, DisjointAlphabetsStayFarFromParallel) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::string a, b;
    for (int i = 0; i < 24; ++i) {
      a.push_back(static_cast<char>('a' + rng() % 13));
      b.push_back(static_cast<char>('n' + rng() % 13));
    }
    const std::vector<std::string> s{a, b};
    const auto m = embed(s, {});
    EXPECT_LT(std::abs(cosine(m.row(0), m.row(1))), 0.5);
  }
}

TEST(HashingEncoderTest, EmptyInputFails) {
  EXPECT_THROW(embed(std::vector<std::string>{}, {}), Error);
}

// One basis vector per line, chosen by line length; echoes 384 numbers.
constexpr const char* kAwkBasis =
    "external:awk '{ n = length($0) % 384; s = \"\"; "
    "for (i = 0; i < 384; i++) s = s (i ? \" \" : \"\") (i == n ? \"2.0\" : \"0\"); print s }'";

TEST(ExternalEncoderTest, ReadsVectorsAndRenormalizes) {
  const std::vector<std::string> s{"a", "abc", "multi\nline"};
  const auto m = embed(s, EncoderSpec::parse(kAwkBasis));
  ASSERT_EQ(m.rows, 3u);
  EXPECT_EQ(m.row(0)[1], 1.0);
  EXPECT_EQ(m.row(1)[3], 1.0);
  // The line break was sent as a space: "multi line" has 10 characters.
  EXPECT_EQ(m.row(2)[10], 1.0);
}

TEST(ExternalEncoderTest, CommandFailureIsReported) {
  const std::vector<std::string> s{"a"};
  EXPECT_THROW(embed(s, EncoderSpec::parse("external:exit 3")), Error);
}

TEST(ExternalEncoderTest, WrongDimensionIsReported) {
  const std::vector<std::string> s{"a"};
  EXPECT_THROW(embed(s, EncoderSpec::parse("external:awk '{ print 1, 2, 3 }'")), Error);
}

TEST(ExternalEncoderTest, MissingLinesAreReported) {
  const std::vector<std::string> s{"a", "b"};
  EXPECT_THROW(embed(s, EncoderSpec::parse("external:head -n 1 | awk '{ s = 1; for (i = 1; "
                                           "i < 384; i++) s = s \" 0\"; print s }'")),
               Error);
}

TEST(ExternalEncoderTest, ZeroVectorIsFlagged) {
  const std::vector<std::string> s{"a"};
  const auto m = embed(s, EncoderSpec::parse("external:awk '{ s = 0; for (i = 1; i < 384; i++) "
                                             "s = s \" 0\"; print s }'"));
  EXPECT_EQ(m.flagged_rows, std::vector<std::size_t>{0});
  EXPECT_EQ(m.row(0)[0], 1.0);
}

}  // namespace
}  // namespace synthqa
