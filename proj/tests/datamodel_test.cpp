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

#include <fstream>
#include <sstream>

#include "synthqa/csv.hpp"
#include "synthqa/datamodel.hpp"
#include "synthqa/error.hpp"
#include "test_support.hpp"

namespace synthqa {
namespace {

using testing::make_dataset;

TEST(CsvTest, ParsesQuotedCellsAndEmbeddedSeparators) {
  const auto t = csv::parse("a,b\n\"x,y\",\"say \"\"hi\"\"\"\n\"line\nbreak\",2\n");
  ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], "x,y");
  EXPECT_EQ(t.rows[0][1], "say \"hi\"");
  EXPECT_EQ(t.rows[1][0], "line\nbreak");
}

TEST(CsvTest, HandlesCrlfAndBom) {
  const auto t = csv::parse("\xEF\xBB\xBF" "a,b\r\n1,2\r\n");
  EXPECT_EQ(t.header[0], "a");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "2");
}

TEST(CsvTest, RejectsRaggedRowsAndOpenQuotes) {
  EXPECT_THROW(csv::parse("a,b\n1\n"), Error);
  EXPECT_THROW(csv::parse("a,b\n\"1,2\n"), Error);
  EXPECT_THROW(csv::parse(""), Error);
}

TEST(CsvTest, WriteThenParseRoundTrips) {
  csv::Table t{{"a", "b"}, {{"x,y", "q\"t"}, {"", "line\nbreak"}}};
  std::ostringstream out;
  csv::write(out, t);
  const auto back = csv::parse(out.str());
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
}

TEST(ValueTest, Iso8601ParsesDatesAndTimes) {
  EXPECT_EQ(parse_iso8601("1970-01-01"), 0);
  EXPECT_EQ(parse_iso8601("1970-01-02T00:00:01"), 86'401'000);
  EXPECT_EQ(parse_iso8601("1970-01-01 00:00:00.250Z"), 250);
  EXPECT_EQ(parse_iso8601("1969-12-31"), -86'400'000);
  EXPECT_FALSE(parse_iso8601("2021-02-30"));
  EXPECT_FALSE(parse_iso8601("2021-1-1"));
  EXPECT_FALSE(parse_iso8601("yesterday"));
}

TEST(ValueTest, Iso8601FormatsCanonically) {
  EXPECT_EQ(format_iso8601(*parse_iso8601("2021-06-30")), "2021-06-30");
  EXPECT_EQ(format_iso8601(*parse_iso8601("2021-06-30T12:30")), "2021-06-30T12:30:00");
  EXPECT_EQ(format_iso8601(*parse_iso8601("2021-06-30T12:30:05.5")), "2021-06-30T12:30:05.500");
}

TEST(ValueTest, NumbersParseStrictlyAndFormatShortest) {
  EXPECT_EQ(parse_number("33"), 33.0);
  EXPECT_EQ(parse_number("-1.5e3"), -1500.0);
  EXPECT_FALSE(parse_number("inf"));
  EXPECT_FALSE(parse_number("nan"));
  EXPECT_FALSE(parse_number("12abc"));
  EXPECT_FALSE(parse_number(""));
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(33.0), "33");
}

TEST(LoadDatasetTest, InfersNumericWithMissing) {
  const Dataset d = make_dataset("age\n33\n47\n\n");
  const Column& age = d.column("age");
  EXPECT_EQ(age.kind(), ColumnKind::kNumeric);
  ASSERT_EQ(d.n_rows(), 3u);
  EXPECT_TRUE(age.is_missing(2));
  EXPECT_EQ(age.number(1), 47.0);
}

TEST(LoadDatasetTest, InfersCategorical) {
  const Dataset d = make_dataset("city\nWien\nGraz\n");
  EXPECT_EQ(d.column("city").kind(), ColumnKind::kCategorical);
}

TEST(LoadDatasetTest, InfersDatetime) {
  const Dataset d = make_dataset("ts\n2021-01-01\n2021-06-30\n2021-03-15T08:00:00\n");
  // Independent check: every cell of the fixture is an ISO-8601 date or datetime.
  for (const char* cell : {"2021-01-01", "2021-06-30", "2021-03-15T08:00:00"}) {
    ASSERT_TRUE(parse_iso8601(cell).has_value());
    ASSERT_FALSE(parse_number(cell).has_value());
  }
  EXPECT_EQ(d.column("ts").kind(), ColumnKind::kDatetime);
}

TEST(LoadDatasetTest, TextOnlyThroughHints) {
  const Dataset d = make_dataset("note\nhello there\n", Role::kTraining, std::nullopt,
                                 {{"note", ColumnKind::kText}});
  EXPECT_EQ(d.column("note").kind(), ColumnKind::kText);
}

TEST(LoadDatasetTest, HintForcesNumericAndCountsUnparsed) {
  std::vector<std::string> warnings;
  const Dataset d = dataset_from_table(csv::parse("x\n1\nfoo\n"), Role::kSynthetic,
                                       {{"x", ColumnKind::kNumeric}}, &warnings);
  EXPECT_EQ(d.column("x").kind(), ColumnKind::kNumeric);
  EXPECT_TRUE(d.column("x").is_missing(1));
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(LoadDatasetTest, RejectsDuplicateHeaders) {
  EXPECT_THROW(make_dataset("a,a\n1,2\n"), Error);
}

TEST(LoadDatasetTest, AllMissingColumnIsCategorical) {
  const Dataset d = make_dataset("a,b\n1,\n2,\n");
  EXPECT_EQ(d.column("b").kind(), ColumnKind::kCategorical);
}

TEST(LoadDatasetTest, InferenceIgnoresRowOrder) {
  const Dataset a = make_dataset("x,y\n1,a\n2.5,2020-01-01\n,b\n");
  const Dataset b = make_dataset("x,y\n,b\n2.5,2020-01-01\n1,a\n");
  for (const auto& name : {"x", "y"}) EXPECT_EQ(a.column(name).kind(), b.column(name).kind());
}

TEST(LoadDatasetTest, LoadingTwiceIsIdentical) {
  testing::TempDir dir;
  const std::string path = dir.file("d.csv");
  std::ofstream(path) << "a,b,c\n1,x,2020-01-01\n,y,\n3.25,,2021-05-05T10:00\n";
  const Dataset a = load_dataset(path, Role::kTraining);
  const Dataset b = load_dataset(path, Role::kTraining);
  ASSERT_EQ(a.column_names(), b.column_names());
  for (const auto& name : a.column_names()) {
    for (std::size_t r = 0; r < a.n_rows(); ++r) {
      EXPECT_TRUE(a.column(name).cell_equals(r, b.column(name), r));
    }
  }
}

TEST(LoadDatasetTest, UnreadableFileFails) {
  EXPECT_THROW(load_dataset("/nonexistent/file.csv", Role::kTraining), Error);
}

TEST(DatasetTest, SequenceKeyMustExistWithoutMissing) {
  EXPECT_THROW(make_dataset("id,v\n1,2\n", Role::kTraining, "nope"), Error);
  EXPECT_THROW(make_dataset("id,v\n1,2\n,3\n", Role::kTraining, "id"), Error);
}

TEST(DatasetTest, SubjectsKeepFirstAppearanceAndFileOrder) {
  const Dataset d = make_dataset("id,v\nb,1\na,2\nb,3\na,4\nc,5\n", Role::kTraining, "id");
  const auto subjects = d.subjects();
  ASSERT_EQ(subjects.size(), 3u);
  EXPECT_EQ(subjects[0].key, "b");
  EXPECT_EQ(subjects[0].rows, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(subjects[1].key, "a");
  EXPECT_EQ(subjects[1].rows, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(subjects[2].rows, (std::vector<std::size_t>{4}));
}

TEST(SchemaHintsTest, ParsesBothSeparatorsAndComments) {
  const auto hints = parse_schema_hints("# hints\na=numeric\nb: text\n\n");
  ASSERT_EQ(hints.size(), 2u);
  EXPECT_EQ(hints.at("a"), ColumnKind::kNumeric);
  EXPECT_EQ(hints.at("b"), ColumnKind::kText);
  EXPECT_THROW(parse_schema_hints("a=float\n"), Error);
}

TEST(JoinContextTest, BroadcastsContextRows) {
  const Dataset ctx = make_dataset("id,seg\n1,A\n");
  const Dataset tgt = make_dataset("user_id,v\n1,x\n1,y\n1,z\n");
  const Dataset joined = join_context(tgt, ctx, {"id", "user_id"});
  ASSERT_EQ(joined.n_rows(), 3u);
  const Column& seg = joined.column("ctx.seg");
  EXPECT_TRUE(seg.from_context());
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(*seg.label(r), "A");
  EXPECT_EQ(*joined.column("v").label(1), "y");
  EXPECT_EQ(joined.find("ctx.id"), nullptr);
}

TEST(JoinContextTest, OrphanKeyFails) {
  const Dataset ctx = make_dataset("id,seg\n1,A\n");
  const Dataset tgt = make_dataset("user_id\n1\n2\n");
  EXPECT_THROW(join_context(tgt, ctx, {"id", "user_id"}), Error);
}

TEST(JoinContextTest, DuplicatePrimaryKeyFails) {
  const Dataset ctx = make_dataset("id,seg\n1,A\n1,B\n");
  const Dataset tgt = make_dataset("user_id\n1\n");
  EXPECT_THROW(join_context(tgt, ctx, {"id", "user_id"}), Error);
}

TEST(JoinContextTest, PreservesTargetOrder) {
  const Dataset ctx = make_dataset("id,seg\n2,B\n1,A\n");
  const Dataset tgt = make_dataset("user_id,t\n1,0\n2,1\n1,2\n2,3\n");
  const Dataset joined = join_context(tgt, ctx, {"id", "user_id"});
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(joined.column("t").number(r), static_cast<double>(r));
    EXPECT_EQ(*joined.column("ctx.seg").label(r), r % 2 == 0 ? "A" : "B");
  }
}

TEST(AlignColumnsTest, IntersectsAndWarns) {
  const Dataset trn = make_dataset("a,b,c\n1,2,3\n");
  const Dataset syn = make_dataset("a,b\n1,2\n", Role::kSynthetic);
  const auto alignment = align_columns(trn, syn);
  ASSERT_EQ(alignment.columns.size(), 2u);
  EXPECT_EQ(alignment.columns[0].name, "a");
  EXPECT_EQ(alignment.columns[1].name, "b");
  ASSERT_EQ(alignment.warnings.size(), 1u);
  EXPECT_NE(alignment.warnings[0].find("'c'"), std::string::npos);
}

TEST(AlignColumnsTest, IdenticalSchemasHaveNoWarnings) {
  const Dataset trn = make_dataset("a,b\n1,2\n");
  const Dataset syn = make_dataset("a,b\n3,4\n", Role::kSynthetic);
  const auto alignment = align_columns(trn, syn);
  EXPECT_EQ(alignment.columns.size(), 2u);
  EXPECT_TRUE(alignment.warnings.empty());
}

TEST(AlignColumnsTest, EmptyIntersectionFails) {
  const Dataset trn = make_dataset("a\n1\n");
  const Dataset syn = make_dataset("b\n1\n", Role::kSynthetic);
  EXPECT_THROW(align_columns(trn, syn), Error);
}

TEST(AlignColumnsTest, TrainingKindsWin) {
  const Dataset trn = make_dataset("a\n1\n2\n");
  const Dataset syn = make_dataset("a\n1\nx\n", Role::kSynthetic);
  ASSERT_EQ(syn.column("a").kind(), ColumnKind::kCategorical);
  const auto alignment = align_columns(trn, syn);
  std::vector<std::string> warnings;
  const Dataset conformed = conform(syn, alignment, &warnings);
  EXPECT_EQ(conformed.column("a").kind(), ColumnKind::kNumeric);
  EXPECT_TRUE(conformed.column("a").is_missing(1));
  EXPECT_EQ(warnings.size(), 1u);
}

}  // namespace
}  // namespace synthqa
