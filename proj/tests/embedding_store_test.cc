//
// Copyright 2026 The domlex Authors
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
//

#include <sstream>

#include <gtest/gtest.h>

#include "domlex/embedding_store.h"
#include "domlex/error.h"
#include "testing.h"

namespace domlex {
namespace {

EmbeddingSpace Parse(const std::string& text,
                     std::optional<size_t> dim = std::nullopt,
                     LoadStats* stats = nullptr) {
  std::istringstream in(text);
  return ParseEmbeddings(in, dim, stats);
}

TEST(ParseEmbeddings, ReadsHeaderAndRows) {
  const auto space = Parse("3 2\nthe 1 0\ncat 0.5 -0.5\ndog 2 3e-1\n");
  EXPECT_EQ(space.size(), 3u);
  EXPECT_EQ(space.dim(), 2u);
  EXPECT_EQ(space.vocab.Word(1), "cat");
  EXPECT_EQ(*space.vocab.Find("dog"), 2u);
  EXPECT_DOUBLE_EQ(space.matrix(2, 1), 0.3);
  EXPECT_EQ(space.kind, SpaceKind::kStatic);
}

TEST(ParseEmbeddings, ToleratesCrlfAndBlankLines) {
  const auto space = Parse("2 1\r\na 1\r\n\nb 2\r\n");
  EXPECT_EQ(space.size(), 2u);
  EXPECT_EQ(space.matrix(1, 0), 2.0);
}

TEST(ParseEmbeddings, RejectsMalformedInput) {
  EXPECT_THROW(Parse(""), FormatError);
  EXPECT_THROW(Parse("3\n"), FormatError);
  EXPECT_THROW(Parse("x 2\n"), FormatError);
  EXPECT_THROW(Parse("1 2\na 1\n"), FormatError);         // arity
  EXPECT_THROW(Parse("1 2\na 1 2 3\n"), FormatError);     // arity
  EXPECT_THROW(Parse("1 2\na 1 nan\n"), FormatError);     // non-finite
  EXPECT_THROW(Parse("1 2\na 1 abc\n"), FormatError);
  EXPECT_THROW(Parse("2 2\na 1 2\n"), FormatError);       // too few rows
  EXPECT_THROW(Parse("1 2\na 1 2\nb 3 4\n"), FormatError);  // too many
  EXPECT_THROW(Parse("1 2\na 1 2\n", 3), FormatError);    // expected dim
}

TEST(ParseEmbeddings, FirstDuplicateWins) {
  LoadStats stats;
  const auto space = Parse("3 1\na 1\nb 2\na 3\n", std::nullopt, &stats);
  EXPECT_EQ(space.size(), 2u);
  EXPECT_EQ(stats.duplicates_dropped, 1u);
  EXPECT_EQ(space.matrix(0, 0), 1.0);
}

TEST(WriteEmbeddings, RoundTripIsBitExact) {
  auto m = testing::RandomGaussian(20, 7, 99);
  const auto space = MakeSpace(testing::Words("w", 20), m);
  std::ostringstream out;
  WriteEmbeddings(space, out);
  const auto back = Parse(out.str());
  EXPECT_EQ(back.vocab.words(), space.vocab.words());
  EXPECT_TRUE((back.matrix.array() == space.matrix.array()).all());

  testing::TempDir dir;
  SaveEmbeddings(space, dir / "v.vec");
  EXPECT_EQ(testing::ReadText(dir / "v.vec"), out.str());
  EXPECT_TRUE((LoadEmbeddings(dir / "v.vec").matrix.array() ==
               space.matrix.array()).all());
}

TEST(Vocabulary, RejectsDuplicates) {
  EXPECT_THROW(Vocabulary({"a", "b", "a"}), InvalidArgumentError);
  Vocabulary v;
  EXPECT_TRUE(v.Add("x"));
  EXPECT_FALSE(v.Add("x"));
  EXPECT_EQ(v.size(), 1u);
  EXPECT_FALSE(v.Find("y").has_value());
}

TEST(MakeSpace, ChecksShapeAndFiniteness) {
  EXPECT_THROW(MakeSpace({"a"}, Matrix::Zero(2, 2)), InvalidArgumentError);
  Matrix bad = Matrix::Zero(1, 2);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(MakeSpace({"a"}, bad), NumericalError);
}

TEST(Normalize, UnitCenterUnit) {
  const auto space = MakeSpace(testing::Words("w", 30),
                               testing::RandomGaussian(30, 5, 1) + Matrix::Constant(30, 5, 3.0));
  const auto unit = Normalize(space, NormScheme::kUnit);
  for (Eigen::Index i = 0; i < 30; ++i) {
    EXPECT_NEAR(unit.matrix.row(i).norm(), 1.0, 1e-12);
  }
  const auto centered = Normalize(space, NormScheme::kCenter);
  EXPECT_LT(centered.matrix.colwise().mean().cwiseAbs().maxCoeff(), 1e-12);

  const auto ucu = Normalize(space, NormScheme::kUnitCenterUnit);
  ASSERT_EQ(ucu.normalization_history.size(), 3u);
  EXPECT_TRUE(IsNormalizedWith(ucu, NormScheme::kUnitCenterUnit));
  EXPECT_TRUE(IsNormalizedWith(ucu, NormScheme::kUnit));
  EXPECT_FALSE(IsNormalizedWith(space, NormScheme::kUnit));

  // Reference: the steps done by hand.
  Matrix ref = space.matrix;
  for (Eigen::Index i = 0; i < ref.rows(); ++i) ref.row(i) /= ref.row(i).norm();
  Eigen::RowVectorXd mean = ref.colwise().mean();
  ref.rowwise() -= mean;
  for (Eigen::Index i = 0; i < ref.rows(); ++i) ref.row(i) /= ref.row(i).norm();
  EXPECT_LT((ref - ucu.matrix).cwiseAbs().maxCoeff(), 1e-14);
  // The input is untouched.
  EXPECT_TRUE(space.normalization_history.empty());
}

TEST(Normalize, ZeroRowUnderUnitIsAnError) {
  Matrix m = Matrix::Ones(3, 2);
  m.row(1).setZero();
  const auto space = MakeSpace({"a", "b", "c"}, m);
  EXPECT_THROW(Normalize(space, NormScheme::kUnit), NumericalError);
  EXPECT_NO_THROW(Normalize(space, NormScheme::kCenter));
}

TEST(ParseNormScheme, Names) {
  EXPECT_EQ(ParseNormScheme("unit-center-unit"), NormScheme::kUnitCenterUnit);
  EXPECT_EQ(ToString(NormScheme::kCenter), "center");
  EXPECT_THROW(ParseNormScheme("l2"), InvalidArgumentError);
}

TEST(Dictionary, MultipleTargetsAndBlankLines) {
  std::istringstream in("a\tx\n\na\ty\nb\tz\r\n");
  const auto d = ParseDictionary(in);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.pair_count(), 3u);
  ASSERT_NE(d.Find("a"), nullptr);
  EXPECT_EQ(d.Find("a")->size(), 2u);
  EXPECT_EQ(d.Find("c"), nullptr);
}

TEST(Dictionary, RejectsBadLines) {
  for (const char* text : {"a b\n", "a\tb\tc\n", "\tb\n", "a\t\n", "a x\tb\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(ParseDictionary(in), FormatError) << text;
  }
}

TEST(Dictionary, SaveLoadRoundTrip) {
  BilingualDictionary d;
  d.Add("a", "x");
  d.Add("a", "y");
  d.Add("b", "z");
  testing::TempDir dir;
  SaveDictionary(d, dir / "d.tsv");
  const auto back = LoadDictionary(dir / "d.tsv");
  EXPECT_EQ(back.entries(), d.entries());
  EXPECT_THROW(d.Add("a", ""), InvalidArgumentError);
}

}  // namespace
}  // namespace domlex
