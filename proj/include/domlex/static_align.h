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

// Fully unsupervised alignment of two embedding spaces into one
// cross-lingual space: sorted-similarity initialization, orthogonal
// Procrustes mapping with optional whitening and re-weighting, and an
// iterative self-learning loop.

#ifndef DOMLEX_STATIC_ALIGN_H_
#define DOMLEX_STATIC_ALIGN_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "domlex/embedding_store.h"
#include "domlex/retrieval.h"

namespace domlex {

enum class Side { kSource, kTarget };

struct AlignmentModel {
  Matrix w_src;
  Matrix w_tgt;
  std::optional<Matrix> whitening_src;
  std::optional<Matrix> whitening_tgt;
  // Singular values of the final cross-covariance; re-weighting scales
  // mapped column c by singular_values[c]^reweight_exponent.
  Vector singular_values;
  double reweight_exponent = 0.0;
  NormScheme normalization = NormScheme::kUnitCenterUnit;

  size_t dim() const { return static_cast<size_t>(w_src.rows()); }
  bool whitened() const { return whitening_src.has_value(); }

  static AlignmentModel Identity(size_t dim,
                                 NormScheme normalization = NormScheme::kUnitCenterUnit);

  // Exact equality of every field (used for determinism checks).
  bool operator==(const AlignmentModel& other) const;
};

struct SelfLearnConfig {
  RetrievalMetric metric = RetrievalMetric::kCsls;
  size_t csls_k = kDefaultCslsK;
  size_t max_iterations = 100;
  double convergence_tolerance = 1e-6;
  double stochastic_keep_probability = 0.9;
  uint64_t rng_seed = 0;
  // Rows taken from the top of each vocabulary (assumed frequency order) to
  // build the n x n similarity profiles of the initialization.
  size_t init_max_words = 4000;
  // Rows considered during iterative dictionary induction; 0 means all.
  size_t induction_max_words = 20000;
  bool whiten = false;
  double reweight_exponent = 0.0;
  NormScheme normalization = NormScheme::kUnitCenterUnit;

  // Throws InvalidArgumentError if a field is out of range.
  void Validate() const;
};

// Sorts every row of the intra-lingual similarity matrices X X^T and Z Z^T,
// normalizes the sorted profiles and matches each source row to the target
// row with the most similar profile. Considers the first
// min(|src|, |tgt|, max_words) rows of each space.
InducedDictionary UnsupervisedInit(const EmbeddingSpace& src,
                                   const EmbeddingSpace& tgt,
                                   size_t max_words = 4000);

struct ProcrustesOptions {
  bool whiten = false;
  double reweight_exponent = 0.0;
  NormScheme normalization = NormScheme::kUnitCenterUnit;
};

// Orthogonal maps (U, V) from the SVD U S V^T of X_s^T Z_s over the seed
// pairs, i.e. the maps maximizing the summed similarity of mapped pairs.
AlignmentModel Procrustes(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                          const InducedDictionary& seed,
                          const ProcrustesOptions& options = {});

struct SelfLearnTrace {
  std::vector<double> objectives;    // mean best retrieval score per iteration
  std::vector<double> best_so_far;
  size_t best_iteration = 0;
  bool converged = false;
  InducedDictionary initial_dictionary;
};

// Alternates Procrustes and nearest-neighbor induction (with stochastic
// candidate dropout) starting from UnsupervisedInit. Returns the best model
// seen. Inputs not yet normalized with config.normalization are normalized
// first.
AlignmentModel SelfLearn(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                         const SelfLearnConfig& config,
                         SelfLearnTrace* trace = nullptr);

// Normalization (skipped if already applied), optional whitening, the
// orthogonal map and optional re-weighting, in that order.
EmbeddingSpace MapSpace(const EmbeddingSpace& space,
                        const AlignmentModel& model, Side side);
Matrix MapRows(const Matrix& normalized_rows, const AlignmentModel& model,
               Side side);

void WriteAlignmentModel(const AlignmentModel& model, std::ostream& out);
AlignmentModel ReadAlignmentModel(std::istream& in);
void SaveAlignmentModel(const AlignmentModel& model,
                        const std::filesystem::path& path);
AlignmentModel LoadAlignmentModel(const std::filesystem::path& path);

// Shared by the model and network containers: "<name> <rows> <cols>" then
// row-major values with full precision.
void WriteMatrix(std::ostream& out, std::string_view name, const Matrix& m);
Matrix ReadMatrix(std::istream& in, std::string_view name);

}  // namespace domlex

#endif  // DOMLEX_STATIC_ALIGN_H_
