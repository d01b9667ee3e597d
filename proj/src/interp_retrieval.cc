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

#include "domlex/interp_retrieval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "domlex/error.h"
#include "domlex/text_util.h"

namespace domlex {

std::string_view ToString(MissingAnchorPolicy policy) {
  return policy == MissingAnchorPolicy::kSkip ? "skip" : "static-only-fallback";
}

MissingAnchorPolicy ParseMissingAnchorPolicy(std::string_view name) {
  if (name == "static-only-fallback") {
    return MissingAnchorPolicy::kStaticOnlyFallback;
  }
  if (name == "skip") return MissingAnchorPolicy::kSkip;
  throw InvalidArgumentError("unknown missing-anchor policy '" +
                             std::string(name) + "'");
}

std::vector<double> DefaultLambdaGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

void InterpolationConfig::Validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgumentError("lambda must be finite and >= 0");
  }
  if (lambda_grid.empty()) {
    throw InvalidArgumentError("lambda grid must be nonempty");
  }
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end())) {
    throw InvalidArgumentError("lambda grid must be sorted");
  }
  if (csls_k == 0) throw InvalidArgumentError("csls_k must be positive");
}

double InterpolatedScore(std::span<const double> u_x, std::span<const double> u_y,
                         std::span<const double> a_x, std::span<const double> a_y,
                         double lambda) {
  return Cosine(u_x, u_y) + lambda * Cosine(a_x, a_y);
}

namespace {

std::vector<std::optional<size_t>> RowMap(const Vocabulary& from,
                                          const EmbeddingSpace* to) {
  std::vector<std::optional<size_t>> out(from.size());
  if (!to) return out;
  for (size_t i = 0; i < from.size(); ++i) out[i] = to->vocab.Find(from.Word(i));
  return out;
}

size_t ClampK(size_t k, const Matrix& a, const Matrix& b) {
  return std::max<size_t>(
      1, std::min({k, static_cast<size_t>(a.rows()), static_cast<size_t>(b.rows())}));
}

}  // namespace

InterpolatedRetriever::InterpolatedRetriever(const EmbeddingSpace& unified_src,
                                             const EmbeddingSpace& unified_tgt,
                                             const EmbeddingSpace* anchors_src,
                                             const EmbeddingSpace* anchors_tgt,
                                             RetrievalMetric metric,
                                             size_t csls_k,
                                             MissingAnchorPolicy policy)
    : src_vocab_(unified_src.vocab),
      tgt_vocab_(unified_tgt.vocab),
      metric_(metric),
      policy_(policy) {
  if (unified_src.dim() != unified_tgt.dim()) {
    throw InvalidArgumentError("unified spaces differ in dimension");
  }
  if (unified_tgt.size() == 0) {
    throw InvalidArgumentError("unified target space is empty");
  }
  if ((anchors_src == nullptr) != (anchors_tgt == nullptr)) {
    throw InvalidArgumentError("anchor spaces must be given for both sides");
  }
  us_ = UnitRows(unified_src.matrix);
  ut_ = UnitRows(unified_tgt.matrix);
  has_anchors_ = anchors_src != nullptr && anchors_src->size() > 0 &&
                 anchors_tgt->size() > 0;
  if (has_anchors_) {
    if (anchors_src->dim() != anchors_tgt->dim()) {
      throw InvalidArgumentError("anchor spaces differ in dimension");
    }
    as_ = UnitRows(anchors_src->matrix);
    at_ = UnitRows(anchors_tgt->matrix);
    src_anchor_row_ = RowMap(src_vocab_, anchors_src);
    tgt_anchor_row_ = RowMap(tgt_vocab_, anchors_tgt);
  } else {
    src_anchor_row_.assign(src_vocab_.size(), std::nullopt);
    tgt_anchor_row_.assign(tgt_vocab_.size(), std::nullopt);
  }
  if (metric_ == RetrievalMetric::kCsls) {
    if (us_.rows() > 0) {
      r_us_ = KnnMeanSimilarity(us_, ut_, ClampK(csls_k, us_, ut_));
      r_ut_ = KnnMeanSimilarity(ut_, us_, ClampK(csls_k, us_, ut_));
    }
    if (has_anchors_) {
      r_as_ = KnnMeanSimilarity(as_, at_, ClampK(csls_k, as_, at_));
      r_at_ = KnnMeanSimilarity(at_, as_, ClampK(csls_k, as_, at_));
    }
  }
}

std::vector<double> InterpolatedRetriever::TermRow(const Matrix& queries,
                                                   const Matrix& candidates,
                                                   const Vector& r_query,
                                                   const Vector& r_cand,
                                                   Eigen::Index row) const {
  Vector sims = candidates * queries.row(row).transpose();
  if (metric_ == RetrievalMetric::kCsls) {
    sims = 2.0 * sims - r_cand;
    sims.array() -= r_query(row);
  }
  return std::vector<double>(sims.data(), sims.data() + sims.size());
}

InterpolatedRetriever::Terms InterpolatedRetriever::TermsFor(size_t src_row) const {
  if (src_row >= src_vocab_.size()) {
    throw InvalidArgumentError("source row out of range");
  }
  Terms t;
  const auto n = tgt_vocab_.size();
  t.static_scores = TermRow(us_, ut_, r_us_, r_ut_, static_cast<Eigen::Index>(src_row));
  t.anchor_scores.assign(n, 0.0);
  t.eligible.assign(n, true);
  if (!has_anchors_) return t;
  const auto& src_anchor = src_anchor_row_[src_row];
  if (!src_anchor) {
    if (policy_ == MissingAnchorPolicy::kSkip) t.eligible.assign(n, false);
    return t;
  }
  const std::vector<double> anchor_row =
      TermRow(as_, at_, r_as_, r_at_, static_cast<Eigen::Index>(*src_anchor));
  for (size_t j = 0; j < n; ++j) {
    if (const auto& r = tgt_anchor_row_[j]) {
      t.anchor_scores[j] = anchor_row[*r];
    } else if (policy_ == MissingAnchorPolicy::kSkip) {
      t.eligible[j] = false;
    }
  }
  return t;
}

std::vector<double> InterpolatedRetriever::Combine(const Terms& terms,
                                                   double lambda) {
  std::vector<double> s(terms.static_scores.size());
  for (size_t j = 0; j < s.size(); ++j) {
    s[j] = terms.static_scores[j] + lambda * terms.anchor_scores[j];
  }
  return s;
}

std::optional<size_t> InterpolatedRetriever::Best(const Terms& terms,
                                                  double lambda) {
  std::optional<size_t> best;
  double best_score = 0.0;
  for (size_t j = 0; j < terms.static_scores.size(); ++j) {
    if (!terms.eligible[j]) continue;
    const double s = terms.static_scores[j] + lambda * terms.anchor_scores[j];
    if (!best || s > best_score) {
      best = j;
      best_score = s;
    }
  }
  return best;
}

std::optional<size_t> InterpolatedRetriever::Best(size_t src_row,
                                                  double lambda) const {
  return Best(TermsFor(src_row), lambda);
}

RetrievalResult InterpolatedRetriever::Translate(const std::string& word,
                                                 double lambda,
                                                 size_t top_n) const {
  const auto row = src_vocab_.Find(word);
  if (!row) {
    throw InvalidArgumentError("word '" + word + "' is not in the source space");
  }
  const Terms terms = TermsFor(*row);
  const std::vector<double> scores = Combine(terms, lambda);
  std::vector<size_t> order = RankIndices(scores, terms.eligible);
  if (top_n && order.size() > top_n) order.resize(top_n);
  RetrievalResult result;
  result.query = word;
  for (size_t j : order) result.candidates.push_back({tgt_vocab_.Word(j), scores[j]});
  return result;
}

InterpolatedRetriever InterpolatedRetriever::Reversed() const {
  InterpolatedRetriever r;
  r.src_vocab_ = tgt_vocab_;
  r.tgt_vocab_ = src_vocab_;
  r.us_ = ut_;
  r.ut_ = us_;
  r.as_ = at_;
  r.at_ = as_;
  r.src_anchor_row_ = tgt_anchor_row_;
  r.tgt_anchor_row_ = src_anchor_row_;
  r.r_us_ = r_ut_;
  r.r_ut_ = r_us_;
  r.r_as_ = r_at_;
  r.r_at_ = r_as_;
  r.metric_ = metric_;
  r.policy_ = policy_;
  r.has_anchors_ = has_anchors_;
  return r;
}

RetrievalResult Translate(const std::string& word,
                          const EmbeddingSpace& unified_src,
                          const EmbeddingSpace& unified_tgt,
                          const EmbeddingSpace* anchors_src,
                          const EmbeddingSpace* anchors_tgt,
                          const InterpolationConfig& config) {
  config.Validate();
  InterpolatedRetriever retriever(unified_src, unified_tgt, anchors_src,
                                  anchors_tgt, config.metric, config.csls_k,
                                  config.missing_anchor_policy);
  return retriever.Translate(word, config.lambda, config.top_n);
}

LambdaSweep TuneLambda(const std::vector<std::string>& validation_words,
                       const InterpolatedRetriever& forward,
                       const InterpolatedRetriever& backward,
                       const std::vector<double>& grid) {
  if (validation_words.empty()) {
    throw InvalidArgumentError("validation set is empty");
  }
  if (grid.empty()) throw InvalidArgumentError("lambda grid is empty");
  LambdaSweep sweep;
  sweep.grid = grid;
  std::vector<size_t> hits(grid.size(), 0);
  for (const auto& word : validation_words) {
    const auto x = forward.source_vocab().Find(word);
    if (!x) continue;
    ++sweep.validation_used;
    const auto terms = forward.TermsFor(*x);
    for (size_t g = 0; g < grid.size(); ++g) {
      const auto y = InterpolatedRetriever::Best(terms, grid[g]);
      if (!y) continue;
      const std::string& y_word = forward.target_vocab().Word(*y);
      const auto y_row = backward.source_vocab().Find(y_word);
      if (!y_row) continue;
      const auto back = backward.Best(*y_row, grid[g]);
      if (back && backward.target_vocab().Word(*back) == word) ++hits[g];
    }
  }
  if (sweep.validation_used == 0) {
    throw InvalidArgumentError("no validation word is in the source space");
  }
  size_t best = 0;
  for (size_t g = 0; g < grid.size(); ++g) {
    sweep.round_trip_scores.push_back(static_cast<double>(hits[g]) /
                                      static_cast<double>(sweep.validation_used));
    if (hits[g] > hits[best]) best = g;
  }
  // Ties toward the smaller lambda even if the grid was not sorted.
  for (size_t g = 0; g < grid.size(); ++g) {
    if (hits[g] == hits[best] && grid[g] < grid[best]) best = g;
  }
  sweep.best_lambda = grid[best];
  return sweep;
}

std::string FormatTranslations(const std::vector<RetrievalResult>& results,
                               size_t top_n) {
  std::string out;
  for (const auto& r : results) {
    for (size_t i = 0; i < r.candidates.size() && (top_n == 0 || i < top_n); ++i) {
      out += r.query;
      out.push_back('\t');
      out += r.candidates[i].word;
      out.push_back('\t');
      out += FormatDouble(r.candidates[i].score);
      out.push_back('\n');
    }
  }
  return out;
}

std::string FormatLambdaSweep(const LambdaSweep& sweep) {
  std::string out = "lambda\tround_trip\n";
  for (size_t g = 0; g < sweep.grid.size(); ++g) {
    out += FormatDouble(sweep.grid[g]);
    out.push_back('\t');
    out += FormatDouble(sweep.round_trip_scores[g]);
    out.push_back('\n');
  }
  return out;
}

}  // namespace domlex
