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

#include "domlex/retrieval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>

#include "domlex/error.h"
#include "domlex/random.h"
#include "domlex/text_util.h"
#include "json.hpp"

namespace domlex {
namespace {

constexpr Eigen::Index kBlockRows = 256;

}  // namespace

std::string_view ToString(RetrievalMetric metric) {
  return metric == RetrievalMetric::kCosine ? "cosine" : "csls";
}

RetrievalMetric ParseMetric(std::string_view name) {
  if (name == "cosine") return RetrievalMetric::kCosine;
  if (name == "csls") return RetrievalMetric::kCsls;
  throw InvalidArgumentError("unknown metric '" + std::string(name) + "'");
}

void InducedDictionary::Validate() const {
  for (const auto& p : pairs) {
    if (p.source >= source_size || p.target >= target_size) {
      throw InvalidArgumentError("induced pair index out of bounds");
    }
    if (!std::isfinite(p.score)) {
      throw NumericalError("induced pair has a non-finite score");
    }
  }
}

bool InducedDictionary::SamePairs(const InducedDictionary& other) const {
  if (pairs.size() != other.pairs.size()) return false;
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].source != other.pairs[i].source ||
        pairs[i].target != other.pairs[i].target) {
      return false;
    }
  }
  return true;
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgumentError("cosine of vectors with different lengths");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw NumericalError("cosine of a zero vector");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

Matrix UnitRows(const Matrix& m) {
  Matrix out = m;
  ApplyNormStep(out, NormStep::kUnit);
  return out;
}

Vector KnnMeanSimilarity(const Matrix& a, const Matrix& b, size_t k) {
  if (k == 0 || k > static_cast<size_t>(b.rows())) {
    throw InvalidArgumentError("csls k=" + std::to_string(k) +
                               " out of range for " +
                               std::to_string(b.rows()) + " neighbors");
  }
  if (a.cols() != b.cols()) {
    throw InvalidArgumentError("dimension mismatch in neighborhood term");
  }
  Vector out(a.rows());
  std::vector<double> row(static_cast<size_t>(b.rows()));
  const auto kk = static_cast<std::ptrdiff_t>(k);
  for (Eigen::Index start = 0; start < a.rows(); start += kBlockRows) {
    const Eigen::Index len = std::min(kBlockRows, a.rows() - start);
    Matrix sims = a.middleRows(start, len) * b.transpose();
    for (Eigen::Index i = 0; i < len; ++i) {
      std::copy(sims.row(i).data(), sims.row(i).data() + sims.cols(),
                row.begin());
      std::partial_sort(row.begin(), row.begin() + kk, row.end(),
                        std::greater<double>());
      double sum = 0.0;
      for (size_t j = 0; j < k; ++j) sum += row[j];
      out(start + i) = sum / static_cast<double>(k);
    }
  }
  return out;
}

Matrix Csls(const Matrix& queries, const Matrix& candidates, size_t k) {
  if (k == 0 || k > static_cast<size_t>(queries.rows()) ||
      k > static_cast<size_t>(candidates.rows())) {
    throw InvalidArgumentError("csls k=" + std::to_string(k) +
                               " out of range");
  }
  const Vector r_query = KnnMeanSimilarity(queries, candidates, k);
  const Vector r_cand = KnnMeanSimilarity(candidates, queries, k);
  Matrix scores = 2.0 * (queries * candidates.transpose());
  scores.colwise() -= r_query;
  scores.rowwise() -= r_cand.transpose();
  return scores;
}

InducedDictionary InduceRows(const Matrix& src_unit, const Matrix& tgt_unit,
                             const InduceOptions& options,
                             double* mean_best_score) {
  if (tgt_unit.rows() == 0) {
    throw InvalidArgumentError("cannot induce against an empty target space");
  }
  if (src_unit.cols() != tgt_unit.cols()) {
    throw InvalidArgumentError("dimension mismatch: " +
                               std::to_string(src_unit.cols()) + " vs " +
                               std::to_string(tgt_unit.cols()));
  }
  const bool csls = options.metric == RetrievalMetric::kCsls;
  Vector r_src, r_tgt;
  if (csls) {
    r_src = KnnMeanSimilarity(src_unit, tgt_unit, options.csls_k);
    r_tgt = KnnMeanSimilarity(tgt_unit, src_unit, options.csls_k);
  }
  const bool dropout = options.keep_probability < 1.0;

  InducedDictionary dict;
  dict.source_size = static_cast<size_t>(src_unit.rows());
  dict.target_size = static_cast<size_t>(tgt_unit.rows());
  dict.pairs.reserve(dict.source_size);
  double best_sum = 0.0;
  for (Eigen::Index start = 0; start < src_unit.rows(); start += kBlockRows) {
    const Eigen::Index len = std::min(kBlockRows, src_unit.rows() - start);
    Matrix scores = src_unit.middleRows(start, len) * tgt_unit.transpose();
    if (csls) {
      scores *= 2.0;
      scores.colwise() -= r_src.segment(start, len);
      scores.rowwise() -= r_tgt.transpose();
    }
    for (Eigen::Index i = 0; i < len; ++i) {
      const auto src_index = static_cast<uint64_t>(start + i);
      Eigen::Index best = 0, kept_best = -1;
      double best_score = -std::numeric_limits<double>::infinity();
      double kept_score = best_score;
      for (Eigen::Index j = 0; j < scores.cols(); ++j) {
        const double s = scores(i, j);
        if (s > best_score) {
          best_score = s;
          best = j;
        }
        if (dropout &&
            UniformAt(options.dropout_seed,
                      {src_index, static_cast<uint64_t>(j)}) <
                options.keep_probability &&
            s > kept_score) {
          kept_score = s;
          kept_best = j;
        }
      }
      best_sum += best_score;
      if (dropout && kept_best >= 0) {
        dict.pairs.push_back({src_index, static_cast<size_t>(kept_best),
                              kept_score});
      } else {
        dict.pairs.push_back(
            {src_index, static_cast<size_t>(best), best_score});
      }
    }
  }
  if (mean_best_score) {
    *mean_best_score =
        src_unit.rows() == 0 ? 0.0 : best_sum / static_cast<double>(src_unit.rows());
  }
  return dict;
}

InducedDictionary Induce(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                         RetrievalMetric metric, size_t csls_k) {
  InduceOptions options;
  options.metric = metric;
  options.csls_k = csls_k;
  if (tgt.size() == 0) {
    throw InvalidArgumentError("cannot induce against an empty target space");
  }
  return InduceRows(UnitRows(src.matrix), UnitRows(tgt.matrix), options);
}

std::vector<size_t> RankIndices(std::span<const double> scores,
                                const std::vector<bool>& eligible) {
  std::vector<size_t> idx;
  idx.reserve(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    if (eligible.empty() || eligible[i]) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return scores[a] > scores[b];
  });
  return idx;
}

std::string_view ToString(Outcome outcome) {
  switch (outcome) {
    case Outcome::kCorrect:
      return "correct";
    case Outcome::kWrong:
      return "wrong";
    case Outcome::kOov:
      return "oov";
  }
  return "?";
}

EvalReport EvaluatePAt1(const std::map<std::string, std::string>& predictions,
                        const BilingualDictionary& gold) {
  EvalReport report;
  for (const auto& [source, targets] : gold.entries()) {
    WordOutcome w;
    w.source = source;
    auto it = predictions.find(source);
    if (it == predictions.end()) {
      w.outcome = Outcome::kOov;
      ++report.skipped_oov_count;
    } else {
      w.prediction = it->second;
      ++report.evaluated_count;
      if (targets.count(it->second)) {
        w.outcome = Outcome::kCorrect;
        ++report.correct_count;
      } else {
        w.outcome = Outcome::kWrong;
      }
    }
    report.outcomes.push_back(std::move(w));
  }
  report.p_at_1 = report.evaluated_count == 0
                      ? 0.0
                      : static_cast<double>(report.correct_count) /
                            static_cast<double>(report.evaluated_count);
  return report;
}

std::string FormatReportTsv(const EvalReport& report) {
  std::string out;
  for (const auto& w : report.outcomes) {
    out += w.source;
    out.push_back('\t');
    out += w.prediction;
    out.push_back('\t');
    out += ToString(w.outcome);
    out.push_back('\n');
  }
  return out;
}

std::string FormatReportSummary(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["p_at_1"] = report.p_at_1;
  j["evaluated"] = report.evaluated_count;
  j["skipped"] = report.skipped_oov_count;
  j["correct"] = report.correct_count;
  return j.dump(2) + "\n";
}

std::map<std::string, std::string> LoadPredictions(
    const std::filesystem::path& path) {
  std::map<std::string, std::string> predictions;
  const auto lines = ReadLines(path);
  for (size_t n = 0; n < lines.size(); ++n) {
    if (SplitWhitespace(lines[n]).empty()) continue;
    auto fields = SplitExact(lines[n], '\t');
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() ||
        fields[1].empty()) {
      throw FormatError(path.string() + ":" + std::to_string(n + 1) +
                        ": expected '<source>\\t<target>[\\t<score>]'");
    }
    predictions.emplace(std::string(fields[0]), std::string(fields[1]));
  }
  return predictions;
}

}  // namespace domlex
