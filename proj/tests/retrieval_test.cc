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

#include <gtest/gtest.h>

#include "domlex/error.h"
#include "domlex/random.h"
#include "domlex/retrieval.h"
#include "testing.h"

namespace domlex {
namespace {

TEST(Cosine, BasicsAndErrors) {
  const std::vector<double> a{1, 0}, b{1, 1}, z{0, 0}, c{1, 2, 3};
  EXPECT_NEAR(Cosine(a, b), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(Cosine(a, z), NumericalError);
  EXPECT_THROW(Cosine(a, c), InvalidArgumentError);
}

TEST(Csls, MatchesBruteForceOracle) {
  SplitMix64 shape(2024);
  for (int instance = 0; instance < 100; ++instance) {
    const auto n = static_cast<Eigen::Index>(5 + shape.Below(96));
    const auto m = static_cast<Eigen::Index>(5 + shape.Below(96));
    const auto d = static_cast<Eigen::Index>(2 + shape.Below(15));
    const size_t k = 1 + shape.Below(5);
    const Matrix x = testing::RandomGaussian(n, d, 1000 + instance);
    const Matrix y = testing::RandomGaussian(m, d, 5000 + instance);
    const Matrix got = Csls(UnitRows(x), UnitRows(y), k);
    const Matrix want = testing::BruteForceCsls(x, y, k);
    ASSERT_EQ(got.rows(), n);
    ASSERT_EQ(got.cols(), m);
    EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-9) << "instance " << instance;
  }
}

TEST(Csls, RejectsBadK) {
  const Matrix x = UnitRows(testing::RandomGaussian(4, 3, 1));
  const Matrix y = UnitRows(testing::RandomGaussian(6, 3, 2));
  EXPECT_THROW(Csls(x, y, 0), InvalidArgumentError);
  EXPECT_THROW(Csls(x, y, 5), InvalidArgumentError);
  EXPECT_NO_THROW(Csls(x, y, 4));
}

TEST(KnnMeanSimilarity, PlainLoops) {
  const Matrix a = UnitRows(testing::RandomGaussian(300, 4, 3));
  const Matrix b = UnitRows(testing::RandomGaussian(280, 4, 4));
  const Vector r = KnnMeanSimilarity(a, b, 3);
  for (Eigen::Index i = 0; i < a.rows(); i += 37) {
    std::vector<double> dots;
    for (Eigen::Index j = 0; j < b.rows(); ++j) dots.push_back(a.row(i).dot(b.row(j)));
    std::sort(dots.rbegin(), dots.rend());
    EXPECT_NEAR(r(i), (dots[0] + dots[1] + dots[2]) / 3, 1e-12);
  }
}

TEST(InduceRows, TiesGoToTheLowestIndex) {
  Matrix s(1, 2), t(3, 2);
  s << 1, 0;
  t << 0, 1, 1, 0, 1, 0;
  const auto d = InduceRows(s, t, {});
  ASSERT_EQ(d.pairs.size(), 1u);
  EXPECT_EQ(d.pairs[0].target, 1u);
  EXPECT_DOUBLE_EQ(d.pairs[0].score, 1.0);
}

TEST(InduceRows, KeepProbabilityOneIsPlainArgmax) {
  const Matrix s = UnitRows(testing::RandomGaussian(40, 6, 5));
  const Matrix t = UnitRows(testing::RandomGaussian(50, 6, 6));
  InduceOptions plain;
  InduceOptions drop = plain;
  drop.keep_probability = 1.0;
  drop.dropout_seed = 99;
  EXPECT_TRUE(InduceRows(s, t, plain).SamePairs(InduceRows(s, t, drop)));

  // Heavy dropout changes some choices but never the reported objective.
  double full = 0, dropped = 0;
  InduceRows(s, t, plain, &full);
  InduceOptions heavy = plain;
  heavy.keep_probability = 0.3;
  const auto d = InduceRows(s, t, heavy, &dropped);
  EXPECT_DOUBLE_EQ(full, dropped);
  EXPECT_FALSE(d.SamePairs(InduceRows(s, t, plain)));
}

TEST(InduceRows, CslsMatchesOracleArgmax) {
  const Matrix x = testing::RandomGaussian(30, 5, 8);
  const Matrix y = testing::RandomGaussian(35, 5, 9);
  InduceOptions o;
  o.metric = RetrievalMetric::kCsls;
  o.csls_k = 3;
  const auto d = InduceRows(UnitRows(x), UnitRows(y), o);
  const Matrix ref = testing::BruteForceCsls(x, y, 3);
  for (const auto& p : d.pairs) {
    Eigen::Index best;
    ref.row(static_cast<Eigen::Index>(p.source)).maxCoeff(&best);
    EXPECT_EQ(p.target, static_cast<size_t>(best));
  }
}

TEST(RankIndices, StableDescendingWithEligibility) {
  const std::vector<double> s{0.5, 0.9, 0.5, 0.1};
  EXPECT_EQ(RankIndices(s), (std::vector<size_t>{1, 0, 2, 3}));
  EXPECT_EQ(RankIndices(s, {true, false, true, true}),
            (std::vector<size_t>{0, 2, 3}));
}

// Hand-computed fixture: a has two acceptable translations, c has no
// prediction, e is not in the gold set.
TEST(EvaluatePAt1, HandFixture) {
  BilingualDictionary gold;
  gold.Add("a", "x");
  gold.Add("a", "y");
  gold.Add("b", "z");
  gold.Add("c", "w");
  gold.Add("d", "v");
  const std::map<std::string, std::string> pred{
      {"a", "y"}, {"b", "x"}, {"d", "v"}, {"e", "q"}};
  const auto r = EvaluatePAt1(pred, gold);
  EXPECT_EQ(r.correct_count, 2u);
  EXPECT_EQ(r.evaluated_count, 3u);
  EXPECT_EQ(r.skipped_oov_count, 1u);
  EXPECT_EQ(r.p_at_1, 2.0 / 3.0);
  ASSERT_EQ(r.outcomes.size(), 4u);
  EXPECT_EQ(r.outcomes[2].outcome, Outcome::kOov);
  EXPECT_EQ(FormatReportTsv(r), "a\ty\tcorrect\nb\tx\twrong\nc\t\toov\nd\tv\tcorrect\n");
}

TEST(EvaluatePAt1, EverythingOovGivesZero) {
  BilingualDictionary gold;
  gold.Add("a", "x");
  const auto r = EvaluatePAt1({}, gold);
  EXPECT_EQ(r.p_at_1, 0.0);
  EXPECT_EQ(r.evaluated_count, 0u);
  EXPECT_EQ(r.skipped_oov_count, 1u);
}

TEST(LoadPredictions, FirstLinePerSourceWins) {
  testing::TempDir dir;
  testing::WriteText(dir / "p.tsv", "a\tx\t0.9\na\ty\t0.5\nb\tz\n\n");
  const auto p = LoadPredictions(dir / "p.tsv");
  EXPECT_EQ(p.at("a"), "x");
  EXPECT_EQ(p.at("b"), "z");
  testing::WriteText(dir / "bad.tsv", "a x\n");
  EXPECT_THROW(LoadPredictions(dir / "bad.tsv"), FormatError);
}

TEST(FormatReportSummary, Fields) {
  EvalReport r;
  r.p_at_1 = 0.5;
  r.evaluated_count = 4;
  r.correct_count = 2;
  r.skipped_oov_count = 1;
  const auto text = FormatReportSummary(r);
  EXPECT_NE(text.find("\"p_at_1\": 0.5"), std::string::npos);
  EXPECT_NE(text.find("\"skipped\": 1"), std::string::npos);
}

}  // namespace
}  // namespace domlex
