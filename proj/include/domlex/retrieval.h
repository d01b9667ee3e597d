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

// Cosine and CSLS retrieval, nearest-neighbor dictionary induction and
// precision-at-1 evaluation.

#ifndef DOMLEX_RETRIEVAL_H_
#define DOMLEX_RETRIEVAL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "domlex/embedding_store.h"

namespace domlex {

enum class RetrievalMetric { kCosine, kCsls };

std::string_view ToString(RetrievalMetric metric);
RetrievalMetric ParseMetric(std::string_view name);

inline constexpr size_t kDefaultCslsK = 10;

enum class Direction { kSourceToTarget, kTargetToSource };

struct InducedPair {
  size_t source = 0;
  size_t target = 0;
  double score = 0.0;

  bool operator==(const InducedPair&) const = default;
};

struct InducedDictionary {
  std::vector<InducedPair> pairs;
  Direction direction = Direction::kSourceToTarget;
  size_t source_size = 0;
  size_t target_size = 0;

  // Indices within bounds, scores finite.
  void Validate() const;
  bool SamePairs(const InducedDictionary& other) const;
};

inline std::span<const double> RowSpan(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<size_t>(m.cols())};
}

// dot(a,b)/(|a||b|). Throws NumericalError on a zero vector and
// InvalidArgumentError on a length mismatch.
double Cosine(std::span<const double> a, std::span<const double> b);

// Copy with every row scaled to unit length; throws on a zero row.
Matrix UnitRows(const Matrix& m);

// For each row of `a`, the mean of its k largest dot products with the rows
// of `b` (the CSLS neighborhood term). Requires 1 <= k <= b.rows().
Vector KnnMeanSimilarity(const Matrix& a, const Matrix& b, size_t k);

// CSLS(x, y) = 2 cos(x, y) - r_T(x) - r_S(y) for unit-normalized rows.
// Requires 1 <= k <= min(queries, candidates).
Matrix Csls(const Matrix& queries, const Matrix& candidates, size_t k);

struct InduceOptions {
  RetrievalMetric metric = RetrievalMetric::kCosine;
  size_t csls_k = kDefaultCslsK;
  // Each (source, target) candidate survives with this probability; dropped
  // candidates cannot be selected. 1.0 disables dropout.
  double keep_probability = 1.0;
  uint64_t dropout_seed = 0;
};

// Nearest-neighbor induction over already unit-normalized rows. Ties break
// toward the lowest target index. If `mean_best_score` is given it receives
// the mean over source rows of the best score without dropout.
InducedDictionary InduceRows(const Matrix& src_unit, const Matrix& tgt_unit,
                             const InduceOptions& options,
                             double* mean_best_score = nullptr);

// Argmax-scoring target row for every source row.
InducedDictionary Induce(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                         RetrievalMetric metric, size_t csls_k = kDefaultCslsK);

struct RankedCandidate {
  std::string word;
  double score = 0.0;
};

struct RetrievalResult {
  std::string query;
  std::vector<RankedCandidate> candidates;  // descending by score
};

// Indices sorted by descending score, ties toward the lower index. Entries
// flagged false in `eligible` (when nonempty) are left out.
std::vector<size_t> RankIndices(std::span<const double> scores,
                                const std::vector<bool>& eligible = {});

enum class Outcome { kCorrect, kWrong, kOov };
std::string_view ToString(Outcome outcome);

struct WordOutcome {
  std::string source;
  std::string prediction;  // empty for OOV
  Outcome outcome = Outcome::kOov;
};

struct EvalReport {
  double p_at_1 = 0.0;
  size_t correct_count = 0;
  size_t evaluated_count = 0;
  size_t skipped_oov_count = 0;
  std::vector<WordOutcome> outcomes;  // in gold source order
};

// A gold source is correct iff its prediction is in its gold target set;
// sources without a prediction are OOV and leave the denominator. P@1 is 0
// when nothing was evaluated.
EvalReport EvaluatePAt1(const std::map<std::string, std::string>& predictions,
                        const BilingualDictionary& gold);

// "<source>\t<prediction>\t<correct|wrong|oov>" per gold source.
std::string FormatReportTsv(const EvalReport& report);
// JSON object with p_at_1, evaluated, skipped (and correct).
std::string FormatReportSummary(const EvalReport& report);

// Translation output lines "<source>\t<target>[\t<score>]"; the first line
// seen for a source is its top-1 prediction.
std::map<std::string, std::string> LoadPredictions(
    const std::filesystem::path& path);

}  // namespace domlex

#endif  // DOMLEX_RETRIEVAL_H_
