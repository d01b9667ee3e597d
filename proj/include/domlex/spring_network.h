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

// The spring network: a residual feedforward map per language that pulls
// mapped static embeddings toward their translations, trained with a
// contrastive objective over an induced dictionary.
//
//   u = v + W2 tanh(W1 v + b1) + b2
//   L = - sum_i [ J cos(u_x^i, u_y^i) - sum_j cos(u_x^i, w_y^{i,j}) ]
//
// where w_y^{i,j} are unified representations of J sampled target words that
// are not the induced translation of pair i.

#ifndef DOMLEX_SPRING_NETWORK_H_
#define DOMLEX_SPRING_NETWORK_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "domlex/embedding_store.h"
#include "domlex/error.h"
#include "domlex/retrieval.h"
#include "domlex/static_align.h"

namespace domlex {

// d -> h -> d.
struct FeedForward {
  Matrix w1;  // h x d
  Vector b1;  // h
  Matrix w2;  // d x h
  Vector b2;  // d

  // Residual output v + f(v) for every row of `inputs`.
  Matrix Apply(const Matrix& inputs) const;
};

struct SpringNetwork {
  size_t dim = 0;
  size_t hidden = 0;
  bool shared = false;  // one parameter set serves both languages
  uint64_t rng_seed = 0;
  FeedForward src;
  FeedForward tgt;  // unused when shared

  const FeedForward& For(Side side) const {
    return shared || side == Side::kSource ? src : tgt;
  }
  FeedForward& For(Side side) {
    return shared || side == Side::kSource ? src : tgt;
  }

  // Small random first layer, zero output layer: the map starts as the
  // identity.
  static SpringNetwork Initialize(size_t dim, size_t hidden, uint64_t seed,
                                  bool shared = false);

  bool AllFinite() const;
  bool operator==(const SpringNetwork& other) const;
};

// u = static_vector + net(static_vector) for every row; vocabulary carried
// over.
EmbeddingSpace Unify(const EmbeddingSpace& static_mapped,
                     const SpringNetwork& net, Side side);

// Contrastive objective on already-unified vectors. `negatives[i]` holds the
// J negatives of pair i.
double ContrastiveLoss(const std::vector<std::pair<Vector, Vector>>& positives,
                       const std::vector<std::vector<Vector>>& negatives,
                       size_t negatives_per_pair);

// J distinct target indices in [0, induced.target_size), none equal to the
// target of pair `pair_index`, keyed by (seed, pair_index).
std::vector<size_t> SampleNegatives(size_t pair_index,
                                    const InducedDictionary& induced,
                                    size_t negatives_per_pair, uint64_t seed);

// Static (pre-network) inputs of one training batch.
struct SpringBatch {
  Matrix src_inputs;       // B x d
  Matrix tgt_inputs;       // B x d
  Matrix negative_inputs;  // (B*J) x d, rows i*J .. i*J+J-1 belong to pair i
  size_t negatives_per_pair = 0;
};

struct LossAndGradient {
  double loss = 0.0;
  SpringNetwork gradient;  // same shapes as the network
};

// Contrastive loss of the batch and its exact gradient by backpropagation.
LossAndGradient ComputeLossAndGradient(const SpringNetwork& net,
                                       const SpringBatch& batch);

enum class SpringOptimizer { kSgd, kAdam };

struct SpringTrainConfig {
  size_t negatives_per_pair = 10;  // J
  size_t pair_count = 4000;        // I, capped by the induced dictionary size
  size_t epochs = 50;
  double learning_rate = 1e-3;
  size_t batch_size = 128;
  uint64_t rng_seed = 0;
  size_t hidden = 0;  // 0 means 2 * dim
  bool shared = false;
  SpringOptimizer optimizer = SpringOptimizer::kAdam;
  // Draw fresh negatives every epoch; otherwise the epoch-0 draw is reused.
  bool resample_negatives = true;

  void Validate() const;
};

struct SpringTrainResult {
  SpringNetwork network;  // parameters with the lowest monitored loss
  // Monitored loss after each epoch; entry 0 is the initialization.
  std::vector<double> epoch_losses;
  size_t best_epoch = 0;
  std::vector<InducedPair> training_pairs;
};

// Thrown when the loss becomes non-finite; carries the last finite state.
class SpringDivergedError : public NumericalError {
 public:
  SpringDivergedError(const std::string& what, SpringNetwork last_finite,
                      std::vector<double> epoch_losses)
      : NumericalError(what),
        last_finite_(std::move(last_finite)),
        epoch_losses_(std::move(epoch_losses)) {}
  const SpringNetwork& last_finite() const { return last_finite_; }
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

 private:
  SpringNetwork last_finite_;
  std::vector<double> epoch_losses_;
};

// Trains on the I highest-scoring induced pairs. The monitored loss of an
// epoch is the objective over those pairs with the epoch-0 negatives, so
// epochs are comparable.
SpringTrainResult TrainSpring(const EmbeddingSpace& src_mapped,
                              const EmbeddingSpace& tgt_mapped,
                              const InducedDictionary& induced,
                              const SpringTrainConfig& config);

// "epoch\tloss" lines.
std::string FormatLossLog(const std::vector<double>& epoch_losses);

void WriteSpringNetwork(const SpringNetwork& net, std::ostream& out);
SpringNetwork ReadSpringNetwork(std::istream& in);
void SaveSpringNetwork(const SpringNetwork& net,
                       const std::filesystem::path& path);
SpringNetwork LoadSpringNetwork(const std::filesystem::path& path);

}  // namespace domlex

#endif  // DOMLEX_SPRING_NETWORK_H_
