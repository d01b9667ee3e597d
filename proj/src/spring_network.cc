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

#include "domlex/spring_network.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "domlex/random.h"
#include "domlex/text_util.h"

namespace domlex {
namespace {

constexpr char kNetworkMagic[] = "domlex-spring-network";
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

struct Activations {
  Matrix hidden;  // tanh(V W1^T + b1)
  Matrix output;  // V + hidden W2^T + b2
};

Activations Forward(const FeedForward& ff, const Matrix& inputs) {
  Activations a;
  a.hidden = inputs * ff.w1.transpose();
  a.hidden.rowwise() += ff.b1.transpose();
  a.hidden = a.hidden.array().tanh();
  a.output = inputs + a.hidden * ff.w2.transpose();
  a.output.rowwise() += ff.b2.transpose();
  return a;
}

FeedForward ZerosLike(const FeedForward& ff) {
  FeedForward z;
  z.w1 = Matrix::Zero(ff.w1.rows(), ff.w1.cols());
  z.b1 = Vector::Zero(ff.b1.size());
  z.w2 = Matrix::Zero(ff.w2.rows(), ff.w2.cols());
  z.b2 = Vector::Zero(ff.b2.size());
  return z;
}

void Backward(const FeedForward& ff, const Matrix& inputs,
              const Activations& act, const Matrix& grad_out,
              FeedForward& grad) {
  grad.w2 += grad_out.transpose() * act.hidden;
  grad.b2 += grad_out.colwise().sum().transpose();
  Matrix dz = grad_out * ff.w2;
  dz.array() *= 1.0 - act.hidden.array().square();
  grad.w1 += dz.transpose() * inputs;
  grad.b1 += dz.colwise().sum().transpose();
}

// cos(a, b) and d cos / d a.
double CosineAndGrad(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                     const Eigen::Ref<const Eigen::RowVectorXd>& b,
                     Eigen::RowVectorXd* grad_a) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw NumericalError("cosine of a zero vector in the contrastive loss");
  }
  const double c = a.dot(b) / (na * nb);
  if (grad_a) *grad_a = b / (na * nb) - (c / (na * na)) * a;
  return c;
}

// Loss and gradients with respect to the unified rows.
double UnifiedLoss(const Matrix& ux, const Matrix& uy, const Matrix& un,
                   size_t j_count, Matrix* gx, Matrix* gy, Matrix* gn) {
  const auto d = ux.cols();
  const bool want_grad = gx != nullptr;
  if (want_grad) {
    *gx = Matrix::Zero(ux.rows(), d);
    *gy = Matrix::Zero(uy.rows(), d);
    *gn = Matrix::Zero(un.rows(), d);
  }
  const double jd = static_cast<double>(j_count);
  double loss = 0.0;
  Eigen::RowVectorXd g(d);
  for (Eigen::Index i = 0; i < ux.rows(); ++i) {
    double pair_term = jd * CosineAndGrad(ux.row(i), uy.row(i),
                                          want_grad ? &g : nullptr);
    if (want_grad) {
      gx->row(i) -= jd * g;
      CosineAndGrad(uy.row(i), ux.row(i), &g);
      gy->row(i) -= jd * g;
    }
    for (size_t j = 0; j < j_count; ++j) {
      const auto r = i * static_cast<Eigen::Index>(j_count) +
                     static_cast<Eigen::Index>(j);
      pair_term -= CosineAndGrad(ux.row(i), un.row(r), want_grad ? &g : nullptr);
      if (want_grad) {
        gx->row(i) += g;
        CosineAndGrad(un.row(r), ux.row(i), &g);
        gn->row(r) += g;
      }
    }
    loss -= pair_term;
  }
  return loss;
}

Matrix Stack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols());
  out.topRows(a.rows()) = a;
  out.bottomRows(b.rows()) = b;
  return out;
}

double BatchLoss(const SpringNetwork& net, const SpringBatch& batch) {
  const Matrix ux = net.For(Side::kSource).Apply(batch.src_inputs);
  const Matrix uy = net.For(Side::kTarget).Apply(batch.tgt_inputs);
  const Matrix un = net.For(Side::kTarget).Apply(batch.negative_inputs);
  return UnifiedLoss(ux, uy, un, batch.negatives_per_pair, nullptr, nullptr,
                     nullptr);
}

// Parameter order: src w1, b1, w2, b2, then tgt unless shared.
std::vector<double*> ParameterPointers(SpringNetwork& net, std::vector<size_t>& sizes) {
  std::vector<double*> ptrs;
  sizes.clear();
  auto add = [&](FeedForward& ff) {
    ptrs.push_back(ff.w1.data());
    sizes.push_back(static_cast<size_t>(ff.w1.size()));
    ptrs.push_back(ff.b1.data());
    sizes.push_back(static_cast<size_t>(ff.b1.size()));
    ptrs.push_back(ff.w2.data());
    sizes.push_back(static_cast<size_t>(ff.w2.size()));
    ptrs.push_back(ff.b2.data());
    sizes.push_back(static_cast<size_t>(ff.b2.size()));
  };
  add(net.src);
  if (!net.shared) add(net.tgt);
  return ptrs;
}

class Optimizer {
 public:
  Optimizer(SpringOptimizer kind, double lr) : kind_(kind), lr_(lr) {}

  void Step(SpringNetwork& net, SpringNetwork& grad, double scale) {
    std::vector<size_t> sizes;
    auto params = ParameterPointers(net, sizes);
    auto grads = ParameterPointers(grad, sizes);
    const size_t total = std::accumulate(sizes.begin(), sizes.end(), size_t{0});
    if (kind_ == SpringOptimizer::kAdam && m_.empty()) {
      m_.assign(total, 0.0);
      v_.assign(total, 0.0);
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(t_));
    size_t k = 0;
    for (size_t b = 0; b < params.size(); ++b) {
      for (size_t i = 0; i < sizes[b]; ++i, ++k) {
        const double g = grads[b][i] * scale;
        if (kind_ == SpringOptimizer::kSgd) {
          params[b][i] -= lr_ * g;
        } else {
          m_[k] = kAdamBeta1 * m_[k] + (1.0 - kAdamBeta1) * g;
          v_[k] = kAdamBeta2 * v_[k] + (1.0 - kAdamBeta2) * g * g;
          const double mh = m_[k] / bc1, vh = v_[k] / bc2;
          params[b][i] -= lr_ * mh / (std::sqrt(vh) + kAdamEpsilon);
        }
      }
    }
  }

 private:
  SpringOptimizer kind_;
  double lr_;
  uint64_t t_ = 0;
  std::vector<double> m_, v_;
};

void WriteVector(std::ostream& out, std::string_view name, const Vector& v) {
  WriteMatrix(out, name, v.transpose());
}

Vector ReadVector(std::istream& in, std::string_view name) {
  Matrix m = ReadMatrix(in, name);
  if (m.rows() != 1) throw FormatError(std::string(name) + " must be one row");
  return m.transpose();
}

std::string NextToken(std::istream& in, std::string_view what) {
  std::string tok;
  if (!(in >> tok)) {
    throw FormatError("spring network container truncated, expected " +
                      std::string(what));
  }
  return tok;
}

void Expect(std::istream& in, std::string_view keyword) {
  const std::string tok = NextToken(in, keyword);
  if (tok != keyword) {
    throw FormatError("expected '" + std::string(keyword) + "', got '" + tok +
                      "'");
  }
}

}  // namespace

Matrix FeedForward::Apply(const Matrix& inputs) const {
  if (inputs.cols() != w1.cols()) {
    throw InvalidArgumentError("spring network expects dimension " +
                               std::to_string(w1.cols()) + ", got " +
                               std::to_string(inputs.cols()));
  }
  return Forward(*this, inputs).output;
}

SpringNetwork SpringNetwork::Initialize(size_t dim, size_t hidden,
                                        uint64_t seed, bool shared) {
  if (dim == 0 || hidden == 0) {
    throw InvalidArgumentError("spring network dimensions must be positive");
  }
  SpringNetwork net;
  net.dim = dim;
  net.hidden = hidden;
  net.shared = shared;
  net.rng_seed = seed;
  const auto d = static_cast<Eigen::Index>(dim);
  const auto h = static_cast<Eigen::Index>(hidden);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  auto init = [&](FeedForward& ff, uint64_t side) {
    SplitMix64 rng(DeriveSeed(seed, {side}));
    ff.w1.resize(h, d);
    for (Eigen::Index i = 0; i < ff.w1.size(); ++i) {
      ff.w1.data()[i] = scale * rng.Normal();
    }
    ff.b1 = Vector::Zero(h);
    ff.w2 = Matrix::Zero(d, h);
    ff.b2 = Vector::Zero(d);
  };
  init(net.src, 0);
  if (!shared) {
    init(net.tgt, 1);
  } else {
    net.tgt = ZerosLike(net.src);
  }
  return net;
}

bool SpringNetwork::AllFinite() const {
  auto ok = [](const FeedForward& f) {
    return f.w1.allFinite() && f.b1.allFinite() && f.w2.allFinite() &&
           f.b2.allFinite();
  };
  return ok(src) && (shared || ok(tgt));
}

bool SpringNetwork::operator==(const SpringNetwork& o) const {
  auto same = [](const FeedForward& a, const FeedForward& b) {
    return a.w1 == b.w1 && a.b1 == b.b1 && a.w2 == b.w2 && a.b2 == b.b2;
  };
  return dim == o.dim && hidden == o.hidden && shared == o.shared &&
         rng_seed == o.rng_seed && same(src, o.src) &&
         (shared || same(tgt, o.tgt));
}

EmbeddingSpace Unify(const EmbeddingSpace& static_mapped,
                     const SpringNetwork& net, Side side) {
  if (static_mapped.dim() != net.dim) {
    throw InvalidArgumentError("dimension mismatch: space has " +
                               std::to_string(static_mapped.dim()) +
                               ", network expects " + std::to_string(net.dim));
  }
  EmbeddingSpace out = static_mapped;
  out.matrix = net.For(side).Apply(static_mapped.matrix);
  out.Validate();
  return out;
}

double ContrastiveLoss(const std::vector<std::pair<Vector, Vector>>& positives,
                       const std::vector<std::vector<Vector>>& negatives,
                       size_t negatives_per_pair) {
  if (negatives.size() != positives.size()) {
    throw InvalidArgumentError("one negative list per positive pair required");
  }
  const double jd = static_cast<double>(negatives_per_pair);
  double loss = 0.0;
  for (size_t i = 0; i < positives.size(); ++i) {
    const auto& [ux, uy] = positives[i];
    if (negatives[i].size() != negatives_per_pair) {
      throw InvalidArgumentError("pair " + std::to_string(i) + " has " +
                                 std::to_string(negatives[i].size()) +
                                 " negatives, expected " +
                                 std::to_string(negatives_per_pair));
    }
    auto span = [](const Vector& v) {
      return std::span<const double>(v.data(), static_cast<size_t>(v.size()));
    };
    double term = jd * Cosine(span(ux), span(uy));
    for (const auto& w : negatives[i]) term -= Cosine(span(ux), span(w));
    loss -= term;
  }
  return loss;
}

std::vector<size_t> SampleNegatives(size_t pair_index,
                                    const InducedDictionary& induced,
                                    size_t negatives_per_pair, uint64_t seed) {
  if (pair_index >= induced.pairs.size()) {
    throw InvalidArgumentError("pair index out of range");
  }
  const size_t gold = induced.pairs[pair_index].target;
  if (induced.target_size <= negatives_per_pair) {
    throw InvalidArgumentError(
        "target vocabulary of " + std::to_string(induced.target_size) +
        " words is too small for " + std::to_string(negatives_per_pair) +
        " negatives");
  }
  if (gold >= induced.target_size) {
    throw InvalidArgumentError("pair target index out of range");
  }
  SplitMix64 rng(DeriveSeed(seed, {static_cast<uint64_t>(pair_index)}));
  std::vector<size_t> out;
  out.reserve(negatives_per_pair);
  // Slots 0..T-2 stand for every index except the gold one.
  for (uint64_t slot : SampleWithoutReplacement(induced.target_size - 1,
                                                negatives_per_pair, rng)) {
    const auto s = static_cast<size_t>(slot);
    out.push_back(s < gold ? s : s + 1);
  }
  return out;
}

LossAndGradient ComputeLossAndGradient(const SpringNetwork& net,
                                       const SpringBatch& batch) {
  const size_t j_count = batch.negatives_per_pair;
  if (batch.src_inputs.rows() != batch.tgt_inputs.rows() ||
      static_cast<size_t>(batch.negative_inputs.rows()) !=
          static_cast<size_t>(batch.src_inputs.rows()) * j_count) {
    throw InvalidArgumentError("inconsistent spring batch shapes");
  }
  const FeedForward& fs = net.For(Side::kSource);
  const FeedForward& ft = net.For(Side::kTarget);
  const Activations ax = Forward(fs, batch.src_inputs);
  const Matrix tgt_inputs = Stack(batch.tgt_inputs, batch.negative_inputs);
  const Activations at = Forward(ft, tgt_inputs);
  const auto b = batch.tgt_inputs.rows();

  Matrix gx, gy, gn;
  LossAndGradient out;
  out.loss = UnifiedLoss(ax.output, at.output.topRows(b),
                         at.output.bottomRows(at.output.rows() - b), j_count,
                         &gx, &gy, &gn);
  out.gradient = net;
  out.gradient.src = ZerosLike(net.src);
  out.gradient.tgt = ZerosLike(net.tgt);
  Backward(fs, batch.src_inputs, ax, gx, out.gradient.For(Side::kSource));
  Backward(ft, tgt_inputs, at, Stack(gy, gn), out.gradient.For(Side::kTarget));
  return out;
}

void SpringTrainConfig::Validate() const {
  if (negatives_per_pair == 0) {
    throw InvalidArgumentError("negatives_per_pair must be positive");
  }
  if (pair_count == 0) throw InvalidArgumentError("pair_count must be positive");
  if (batch_size == 0) throw InvalidArgumentError("batch_size must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgumentError("learning_rate must be finite and >= 0");
  }
}

SpringTrainResult TrainSpring(const EmbeddingSpace& src_mapped,
                              const EmbeddingSpace& tgt_mapped,
                              const InducedDictionary& induced,
                              const SpringTrainConfig& config) {
  config.Validate();
  if (src_mapped.dim() != tgt_mapped.dim()) {
    throw InvalidArgumentError("mapped spaces differ in dimension");
  }
  if (induced.pairs.empty()) {
    throw InvalidArgumentError("spring training needs induced pairs");
  }
  if (config.negatives_per_pair >= tgt_mapped.size()) {
    throw InvalidArgumentError(
        "negatives_per_pair must be smaller than the target vocabulary");
  }

  // The I most confident pairs, ties toward the lower source index.
  std::vector<InducedPair> pairs = induced.pairs;
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const InducedPair& a, const InducedPair& b) {
                     return a.score > b.score;
                   });
  pairs.resize(std::min(config.pair_count, pairs.size()));
  InducedDictionary train;
  train.pairs = pairs;
  train.source_size = src_mapped.size();
  train.target_size = tgt_mapped.size();
  train.Validate();

  const auto d = static_cast<Eigen::Index>(src_mapped.dim());
  const auto n = static_cast<Eigen::Index>(pairs.size());
  const size_t j_count = config.negatives_per_pair;
  Matrix vx(n, d), vy(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    vx.row(i) = src_mapped.matrix.row(static_cast<Eigen::Index>(pairs[i].source));
    vy.row(i) = tgt_mapped.matrix.row(static_cast<Eigen::Index>(pairs[i].target));
  }
  auto draw_negatives = [&](uint64_t epoch) {
    const uint64_t seed = DeriveSeed(config.rng_seed, {epoch});
    std::vector<std::vector<size_t>> negs(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) {
      negs[i] = SampleNegatives(i, train, j_count, seed);
    }
    return negs;
  };
  auto build_batch = [&](const std::vector<size_t>& members,
                         const std::vector<std::vector<size_t>>& negs) {
    SpringBatch batch;
    batch.negatives_per_pair = j_count;
    const auto b = static_cast<Eigen::Index>(members.size());
    batch.src_inputs.resize(b, d);
    batch.tgt_inputs.resize(b, d);
    batch.negative_inputs.resize(b * static_cast<Eigen::Index>(j_count), d);
    for (Eigen::Index r = 0; r < b; ++r) {
      const size_t i = members[static_cast<size_t>(r)];
      batch.src_inputs.row(r) = vx.row(static_cast<Eigen::Index>(i));
      batch.tgt_inputs.row(r) = vy.row(static_cast<Eigen::Index>(i));
      for (size_t j = 0; j < j_count; ++j) {
        batch.negative_inputs.row(r * static_cast<Eigen::Index>(j_count) +
                                  static_cast<Eigen::Index>(j)) =
            tgt_mapped.matrix.row(static_cast<Eigen::Index>(negs[i][j]));
      }
    }
    return batch;
  };

  std::vector<size_t> all(pairs.size());
  std::iota(all.begin(), all.end(), size_t{0});
  const auto monitor_negatives = draw_negatives(0);
  const SpringBatch monitor = build_batch(all, monitor_negatives);

  SpringTrainResult result;
  result.training_pairs = pairs;
  const size_t hidden = config.hidden ? config.hidden : 2 * src_mapped.dim();
  SpringNetwork net = SpringNetwork::Initialize(src_mapped.dim(), hidden,
                                                config.rng_seed, config.shared);
  double best_loss = BatchLoss(net, monitor);
  if (!std::isfinite(best_loss)) {
    throw SpringDivergedError("initial spring loss is not finite", net, {});
  }
  result.epoch_losses.push_back(best_loss);
  result.network = net;

  Optimizer optimizer(config.optimizer, config.learning_rate);
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto negs =
        config.resample_negatives ? draw_negatives(epoch) : monitor_negatives;
    SplitMix64 order_rng(DeriveSeed(config.rng_seed, {epoch, 0x6f72646572ULL}));
    std::vector<size_t> order;
    order.reserve(pairs.size());
    for (uint64_t v : SampleWithoutReplacement(pairs.size(), pairs.size(), order_rng)) {
      order.push_back(static_cast<size_t>(v));
    }
    const SpringNetwork before_epoch = net;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<size_t> members(order.begin() + static_cast<std::ptrdiff_t>(start),
                                  order.begin() + static_cast<std::ptrdiff_t>(end));
      LossAndGradient lg = ComputeLossAndGradient(net, build_batch(members, negs));
      optimizer.Step(net, lg.gradient, 1.0 / static_cast<double>(members.size()));
    }
    const double loss = net.AllFinite() ? BatchLoss(net, monitor) : NAN;
    if (!std::isfinite(loss)) {
      throw SpringDivergedError(
          "spring training diverged at epoch " + std::to_string(epoch),
          before_epoch, result.epoch_losses);
    }
    result.epoch_losses.push_back(loss);
    if (loss < best_loss) {
      best_loss = loss;
      result.network = net;
      result.best_epoch = epoch;
    }
  }
  return result;
}

std::string FormatLossLog(const std::vector<double>& epoch_losses) {
  std::string out = "epoch\tloss\n";
  for (size_t e = 0; e < epoch_losses.size(); ++e) {
    out += std::to_string(e);
    out.push_back('\t');
    out += FormatDouble(epoch_losses[e]);
    out.push_back('\n');
  }
  return out;
}

void WriteSpringNetwork(const SpringNetwork& net, std::ostream& out) {
  out << kNetworkMagic << " 1\n";
  out << "dim " << net.dim << " hidden " << net.hidden << " shared "
      << (net.shared ? 1 : 0) << " nonlinearity tanh seed " << net.rng_seed
      << '\n';
  auto write = [&out](const FeedForward& ff, std::string_view side) {
    const std::string p(side);
    WriteMatrix(out, p + ".w1", ff.w1);
    WriteVector(out, p + ".b1", ff.b1);
    WriteMatrix(out, p + ".w2", ff.w2);
    WriteVector(out, p + ".b2", ff.b2);
  };
  write(net.src, "src");
  if (!net.shared) write(net.tgt, "tgt");
}

SpringNetwork ReadSpringNetwork(std::istream& in) {
  Expect(in, kNetworkMagic);
  if (NextToken(in, "version") != "1") {
    throw FormatError("unsupported spring network container version");
  }
  SpringNetwork net;
  Expect(in, "dim");
  const int64_t dim = ParseInt(NextToken(in, "dim"), "dim");
  Expect(in, "hidden");
  const int64_t hidden = ParseInt(NextToken(in, "hidden"), "hidden");
  Expect(in, "shared");
  const std::string shared = NextToken(in, "shared flag");
  Expect(in, "nonlinearity");
  if (NextToken(in, "nonlinearity") != "tanh") {
    throw FormatError("unsupported nonlinearity");
  }
  Expect(in, "seed");
  const std::string seed = NextToken(in, "seed");
  if (dim <= 0 || hidden <= 0 || (shared != "0" && shared != "1")) {
    throw FormatError("malformed spring network header");
  }
  net.dim = static_cast<size_t>(dim);
  net.hidden = static_cast<size_t>(hidden);
  net.shared = shared == "1";
  net.rng_seed = std::stoull(seed);
  auto read = [&](FeedForward& ff, std::string_view side) {
    const std::string p(side);
    ff.w1 = ReadMatrix(in, p + ".w1");
    ff.b1 = ReadVector(in, p + ".b1");
    ff.w2 = ReadMatrix(in, p + ".w2");
    ff.b2 = ReadVector(in, p + ".b2");
    if (ff.w1.rows() != hidden || ff.w1.cols() != dim || ff.b1.size() != hidden ||
        ff.w2.rows() != dim || ff.w2.cols() != hidden || ff.b2.size() != dim) {
      throw FormatError("spring network parameter shapes do not match header");
    }
  };
  read(net.src, "src");
  if (!net.shared) {
    read(net.tgt, "tgt");
  } else {
    net.tgt = ZerosLike(net.src);
  }
  return net;
}

void SaveSpringNetwork(const SpringNetwork& net,
                       const std::filesystem::path& path) {
  std::ostringstream ss;
  WriteSpringNetwork(net, ss);
  WriteFile(path, ss.str());
}

SpringNetwork LoadSpringNetwork(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return ReadSpringNetwork(in);
}

}  // namespace domlex
