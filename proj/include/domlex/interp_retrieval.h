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

// Final translation by interpolating the similarity of unified static
// representations with the similarity of mapped contextual anchors:
//
//   S(x, y) = sim(u_x, u_y) + lambda * sim(a_x, a_y)
//
// and the unsupervised round-trip procedure for choosing lambda.

#ifndef DOMLEX_INTERP_RETRIEVAL_H_
#define DOMLEX_INTERP_RETRIEVAL_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "domlex/embedding_store.h"
#include "domlex/retrieval.h"

namespace domlex {

enum class MissingAnchorPolicy { kStaticOnlyFallback, kSkip };

std::string_view ToString(MissingAnchorPolicy policy);
MissingAnchorPolicy ParseMissingAnchorPolicy(std::string_view name);

// 0.0, 0.1, ..., 1.0
std::vector<double> DefaultLambdaGrid();

struct InterpolationConfig {
  double lambda = 0.5;
  std::vector<double> lambda_grid = DefaultLambdaGrid();
  RetrievalMetric metric = RetrievalMetric::kCosine;  // applied to each term
  size_t csls_k = kDefaultCslsK;
  MissingAnchorPolicy missing_anchor_policy =
      MissingAnchorPolicy::kStaticOnlyFallback;
  size_t top_n = 1;

  void Validate() const;
};

double InterpolatedScore(std::span<const double> u_x, std::span<const double> u_y,
                         std::span<const double> a_x, std::span<const double> a_y,
                         double lambda);

// Scores every target word of the unified target space for a source word.
// Anchor spaces are optional and matched to unified rows by word. Missing
// anchors on the target side follow the policy: fallback drops the anchor
// term, skip removes the candidate. A source word without an anchor gets
// static-only scores under fallback and no candidates under skip.
class InterpolatedRetriever {
 public:
  InterpolatedRetriever(const EmbeddingSpace& unified_src,
                        const EmbeddingSpace& unified_tgt,
                        const EmbeddingSpace* anchors_src,
                        const EmbeddingSpace* anchors_tgt,
                        RetrievalMetric metric = RetrievalMetric::kCosine,
                        size_t csls_k = kDefaultCslsK,
                        MissingAnchorPolicy policy =
                            MissingAnchorPolicy::kStaticOnlyFallback);

  struct Terms {
    std::vector<double> static_scores;  // per target row
    std::vector<double> anchor_scores;  // 0 where no anchor term applies
    std::vector<bool> eligible;
  };

  Terms TermsFor(size_t src_row) const;

  // Combined scores; ineligible entries are meaningless.
  static std::vector<double> Combine(const Terms& terms, double lambda);
  // Highest combined score, ties toward the lowest target row.
  static std::optional<size_t> Best(const Terms& terms, double lambda);

  std::optional<size_t> Best(size_t src_row, double lambda) const;

  // Ranked candidates (all eligible targets, or the first top_n if nonzero).
  // Throws InvalidArgumentError if the word is not in the source space.
  RetrievalResult Translate(const std::string& word, double lambda,
                            size_t top_n = 0) const;

  // The inverse direction: targets become queries.
  InterpolatedRetriever Reversed() const;

  const Vocabulary& source_vocab() const { return src_vocab_; }
  const Vocabulary& target_vocab() const { return tgt_vocab_; }
  bool has_anchors() const { return has_anchors_; }

 private:
  InterpolatedRetriever() = default;

  std::vector<double> TermRow(const Matrix& queries, const Matrix& candidates,
                              const Vector& r_query, const Vector& r_cand,
                              Eigen::Index row) const;

  Vocabulary src_vocab_, tgt_vocab_;
  Matrix us_, ut_;  // unit rows of the unified spaces
  Matrix as_, at_;  // unit rows of the anchor spaces
  std::vector<std::optional<size_t>> src_anchor_row_, tgt_anchor_row_;
  Vector r_us_, r_ut_, r_as_, r_at_;  // CSLS neighborhood terms
  RetrievalMetric metric_ = RetrievalMetric::kCosine;
  MissingAnchorPolicy policy_ = MissingAnchorPolicy::kStaticOnlyFallback;
  bool has_anchors_ = false;
};

// Convenience wrapper building a retriever from the four spaces.
RetrievalResult Translate(const std::string& word,
                          const EmbeddingSpace& unified_src,
                          const EmbeddingSpace& unified_tgt,
                          const EmbeddingSpace* anchors_src,
                          const EmbeddingSpace* anchors_tgt,
                          const InterpolationConfig& config);

struct LambdaSweep {
  double best_lambda = 0.0;
  std::vector<double> grid;
  std::vector<double> round_trip_scores;  // fraction with x' == x
  size_t validation_used = 0;             // words present in the source space
};

// For every grid value aligns each validation word x -> y' with `forward`,
// then y' -> x' with `backward`; the score of lambda is the fraction with
// x' == x. Returns the maximizing lambda, ties toward the smaller value.
// Validation words absent from the forward source space are ignored.
LambdaSweep TuneLambda(const std::vector<std::string>& validation_words,
                       const InterpolatedRetriever& forward,
                       const InterpolatedRetriever& backward,
                       const std::vector<double>& grid);

// "<source>\t<target>\t<score>" lines, top_n per query.
std::string FormatTranslations(const std::vector<RetrievalResult>& results,
                               size_t top_n = 1);

// "lambda\tround_trip" lines.
std::string FormatLambdaSweep(const LambdaSweep& sweep);

}  // namespace domlex

#endif  // DOMLEX_INTERP_RETRIEVAL_H_
