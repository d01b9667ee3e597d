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

#include "domlex/static_align.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "domlex/error.h"
#include "domlex/random.h"
#include "domlex/text_util.h"

namespace domlex {
namespace {

constexpr double kEigenFloor = 1e-9;
constexpr char kModelMagic[] = "domlex-alignment-model";

// Unit/center/unit that leaves zero rows at zero. Sorted similarity profiles
// can legitimately coincide (e.g. any two-word space), which centering turns
// into zero rows.
void NormalizeProfiles(Matrix& m) {
  auto unit = [&m] {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double n = m.row(i).norm();
      if (n > 0.0) m.row(i) /= n;
    }
  };
  unit();
  ApplyNormStep(m, NormStep::kCenter);
  unit();
}

Matrix SortedProfiles(const Matrix& rows) {
  Matrix sims = rows * rows.transpose();
  for (Eigen::Index i = 0; i < sims.rows(); ++i) {
    std::sort(sims.row(i).data(), sims.row(i).data() + sims.cols());
  }
  NormalizeProfiles(sims);
  return sims;
}

// (C^T C)^{-1/2} by symmetric eigendecomposition with an eigenvalue floor.
Matrix InverseSqrtCovariance(const Matrix& rows) {
  Eigen::MatrixXd cov = rows.transpose() * rows;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("covariance eigendecomposition failed");
  }
  Eigen::VectorXd inv_sqrt =
      eig.eigenvalues().unaryExpr([](double v) {
        return 1.0 / std::sqrt(std::max(v, kEigenFloor));
      });
  Eigen::MatrixXd w =
      eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
  return w;
}

Matrix TopRows(const Matrix& m, size_t limit) {
  const auto n =
      limit == 0 ? m.rows()
                 : std::min<Eigen::Index>(m.rows(), static_cast<Eigen::Index>(limit));
  return m.topRows(n);
}

EmbeddingSpace EnsureNormalized(const EmbeddingSpace& space, NormScheme scheme) {
  if (IsNormalizedWith(space, scheme)) return space;
  return Normalize(space, scheme);
}

std::string ExpectToken(std::istream& in, std::string_view what) {
  std::string tok;
  if (!(in >> tok)) {
    throw FormatError("alignment container truncated, expected " +
                      std::string(what));
  }
  return tok;
}

void ExpectKeyword(std::istream& in, std::string_view keyword) {
  const std::string tok = ExpectToken(in, keyword);
  if (tok != keyword) {
    throw FormatError("expected '" + std::string(keyword) + "', got '" + tok +
                      "'");
  }
}

}  // namespace

AlignmentModel AlignmentModel::Identity(size_t dim, NormScheme normalization) {
  AlignmentModel m;
  const auto d = static_cast<Eigen::Index>(dim);
  m.w_src = Matrix::Identity(d, d);
  m.w_tgt = Matrix::Identity(d, d);
  m.singular_values = Vector::Ones(d);
  m.normalization = normalization;
  return m;
}

bool AlignmentModel::operator==(const AlignmentModel& o) const {
  auto same_opt = [](const std::optional<Matrix>& a,
                     const std::optional<Matrix>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || (a->rows() == b->rows() && a->cols() == b->cols() && *a == *b);
  };
  auto same = [](const auto& a, const auto& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  return same(w_src, o.w_src) && same(w_tgt, o.w_tgt) &&
         same_opt(whitening_src, o.whitening_src) &&
         same_opt(whitening_tgt, o.whitening_tgt) &&
         same(singular_values, o.singular_values) &&
         reweight_exponent == o.reweight_exponent &&
         normalization == o.normalization;
}

void SelfLearnConfig::Validate() const {
  if (csls_k == 0) throw InvalidArgumentError("csls_k must be positive");
  if (max_iterations == 0) {
    throw InvalidArgumentError("max_iterations must be positive");
  }
  if (!(convergence_tolerance > 0.0)) {
    throw InvalidArgumentError("convergence_tolerance must be > 0");
  }
  if (!(stochastic_keep_probability > 0.0 &&
        stochastic_keep_probability <= 1.0)) {
    throw InvalidArgumentError("stochastic_keep_probability must be in (0, 1]");
  }
  if (init_max_words == 0) {
    throw InvalidArgumentError("init_max_words must be positive");
  }
  if (!(reweight_exponent >= 0.0)) {
    throw InvalidArgumentError("reweight_exponent must be >= 0");
  }
}

InducedDictionary UnsupervisedInit(const EmbeddingSpace& src,
                                   const EmbeddingSpace& tgt,
                                   size_t max_words) {
  if (src.dim() != tgt.dim()) {
    throw InvalidArgumentError("dimension mismatch: " +
                               std::to_string(src.dim()) + " vs " +
                               std::to_string(tgt.dim()));
  }
  if (src.size() == 0 || tgt.size() == 0) {
    throw InvalidArgumentError("unsupervised initialization needs nonempty spaces");
  }
  const size_t n = std::min({src.size(), tgt.size(), max_words});
  InducedDictionary dict;
  dict.source_size = src.size();
  dict.target_size = tgt.size();
  if (n == 1) {
    dict.pairs.push_back({0, 0, 1.0});
    return dict;
  }
  const Matrix src_profiles = SortedProfiles(TopRows(src.matrix, n));
  const Matrix tgt_profiles = SortedProfiles(TopRows(tgt.matrix, n));
  InduceOptions options;
  options.metric = RetrievalMetric::kCosine;
  InducedDictionary matched = InduceRows(src_profiles, tgt_profiles, options);
  dict.pairs = std::move(matched.pairs);
  return dict;
}

AlignmentModel Procrustes(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                          const InducedDictionary& seed,
                          const ProcrustesOptions& options) {
  if (seed.pairs.empty()) {
    throw InvalidArgumentError("procrustes needs a nonempty seed dictionary");
  }
  if (src.dim() != tgt.dim()) {
    throw InvalidArgumentError("dimension mismatch: " +
                               std::to_string(src.dim()) + " vs " +
                               std::to_string(tgt.dim()));
  }
  const auto d = static_cast<Eigen::Index>(src.dim());
  const auto m = static_cast<Eigen::Index>(seed.pairs.size());
  Matrix xs(m, d), zs(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& p = seed.pairs[static_cast<size_t>(i)];
    if (p.source >= src.size() || p.target >= tgt.size()) {
      throw InvalidArgumentError("seed pair index out of bounds");
    }
    xs.row(i) = src.matrix.row(static_cast<Eigen::Index>(p.source));
    zs.row(i) = tgt.matrix.row(static_cast<Eigen::Index>(p.target));
  }

  AlignmentModel model;
  model.normalization = options.normalization;
  model.reweight_exponent = options.reweight_exponent;
  if (options.whiten) {
    model.whitening_src = InverseSqrtCovariance(xs);
    model.whitening_tgt = InverseSqrtCovariance(zs);
    xs = xs * *model.whitening_src;
    zs = zs * *model.whitening_tgt;
  }
  const Eigen::MatrixXd cross = xs.transpose() * zs;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 1e-12)) {
    throw NumericalError("degenerate cross-covariance (rank 0)");
  }
  model.w_src = svd.matrixU();
  model.w_tgt = svd.matrixV();
  model.singular_values = s;
  return model;
}

Matrix MapRows(const Matrix& rows, const AlignmentModel& model, Side side) {
  if (static_cast<size_t>(rows.cols()) != model.dim()) {
    throw InvalidArgumentError("dimension mismatch: space has " +
                               std::to_string(rows.cols()) +
                               " columns, model expects " +
                               std::to_string(model.dim()));
  }
  const bool src = side == Side::kSource;
  Matrix out = rows;
  const auto& whitening = src ? model.whitening_src : model.whitening_tgt;
  if (whitening) out = out * *whitening;
  out = out * (src ? model.w_src : model.w_tgt);
  if (model.reweight_exponent != 0.0) {
    const Eigen::RowVectorXd scale =
        model.singular_values.array().pow(model.reweight_exponent).transpose();
    out.array().rowwise() *= scale.array();
  }
  return out;
}

EmbeddingSpace MapSpace(const EmbeddingSpace& space,
                        const AlignmentModel& model, Side side) {
  if (space.dim() != model.dim()) {
    throw InvalidArgumentError("dimension mismatch: space has " +
                               std::to_string(space.dim()) +
                               " columns, model expects " +
                               std::to_string(model.dim()));
  }
  EmbeddingSpace out = EnsureNormalized(space, model.normalization);
  out.matrix = MapRows(out.matrix, model, side);
  return out;
}

AlignmentModel SelfLearn(const EmbeddingSpace& src_in,
                         const EmbeddingSpace& tgt_in,
                         const SelfLearnConfig& config, SelfLearnTrace* trace) {
  config.Validate();
  const EmbeddingSpace src = EnsureNormalized(src_in, config.normalization);
  const EmbeddingSpace tgt = EnsureNormalized(tgt_in, config.normalization);

  InducedDictionary dict = UnsupervisedInit(src, tgt, config.init_max_words);
  if (trace) {
    *trace = SelfLearnTrace{};
    trace->initial_dictionary = dict;
  }

  const Matrix src_rows = TopRows(src.matrix, config.induction_max_words);
  const Matrix tgt_rows = TopRows(tgt.matrix, config.induction_max_words);

  ProcrustesOptions popts;
  popts.whiten = config.whiten;
  popts.reweight_exponent = config.reweight_exponent;
  popts.normalization = config.normalization;

  InduceOptions iopts;
  iopts.metric = config.metric;
  iopts.csls_k = std::min({config.csls_k, static_cast<size_t>(src_rows.rows()),
                           static_cast<size_t>(tgt_rows.rows())});
  iopts.keep_probability = config.stochastic_keep_probability;

  AlignmentModel best;
  double best_objective = -std::numeric_limits<double>::infinity();
  for (size_t it = 0; it < config.max_iterations; ++it) {
    AlignmentModel model = Procrustes(src, tgt, dict, popts);
    const Matrix xw = UnitRows(MapRows(src_rows, model, Side::kSource));
    const Matrix zw = UnitRows(MapRows(tgt_rows, model, Side::kTarget));
    iopts.dropout_seed = DeriveSeed(config.rng_seed, {static_cast<uint64_t>(it)});
    double objective = 0.0;
    InducedDictionary next = InduceRows(xw, zw, iopts, &objective);
    next.source_size = src.size();
    next.target_size = tgt.size();

    const bool improved = objective - best_objective >= config.convergence_tolerance;
    if (objective > best_objective) {
      best_objective = objective;
      best = std::move(model);
      if (trace) trace->best_iteration = it;
    }
    if (trace) {
      trace->objectives.push_back(objective);
      trace->best_so_far.push_back(best_objective);
    }
    if (!improved) {
      if (trace) trace->converged = true;
      break;
    }
    dict = std::move(next);
  }
  return best;
}

void WriteMatrix(std::ostream& out, std::string_view name, const Matrix& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << FormatDouble(m(i, j));
    }
    out << '\n';
  }
}

Matrix ReadMatrix(std::istream& in, std::string_view name) {
  ExpectKeyword(in, name);
  const int64_t rows = ParseInt(ExpectToken(in, "rows"), "matrix rows");
  const int64_t cols = ParseInt(ExpectToken(in, "cols"), "matrix cols");
  if (rows < 0 || cols < 0) throw FormatError("negative matrix shape");
  Matrix m(rows, cols);
  for (int64_t i = 0; i < rows; ++i) {
    for (int64_t j = 0; j < cols; ++j) {
      m(i, j) = ParseDouble(ExpectToken(in, "matrix value"), name);
    }
  }
  return m;
}

void WriteAlignmentModel(const AlignmentModel& model, std::ostream& out) {
  out << kModelMagic << " 1\n";
  out << "dim " << model.dim() << '\n';
  out << "normalization " << ToString(model.normalization) << '\n';
  out << "whitening " << (model.whitened() ? 1 : 0) << '\n';
  out << "reweight_exponent " << FormatDouble(model.reweight_exponent) << '\n';
  WriteMatrix(out, "singular_values", model.singular_values.transpose());
  WriteMatrix(out, "w_src", model.w_src);
  WriteMatrix(out, "w_tgt", model.w_tgt);
  if (model.whitened()) {
    WriteMatrix(out, "whitening_src", *model.whitening_src);
    WriteMatrix(out, "whitening_tgt", *model.whitening_tgt);
  }
}

AlignmentModel ReadAlignmentModel(std::istream& in) {
  ExpectKeyword(in, kModelMagic);
  if (ExpectToken(in, "version") != "1") {
    throw FormatError("unsupported alignment container version");
  }
  AlignmentModel model;
  ExpectKeyword(in, "dim");
  const int64_t dim = ParseInt(ExpectToken(in, "dim"), "dim");
  ExpectKeyword(in, "normalization");
  model.normalization = ParseNormScheme(ExpectToken(in, "normalization"));
  ExpectKeyword(in, "whitening");
  const std::string whitening = ExpectToken(in, "whitening flag");
  if (whitening != "0" && whitening != "1") {
    throw FormatError("whitening flag must be 0 or 1");
  }
  ExpectKeyword(in, "reweight_exponent");
  model.reweight_exponent =
      ParseDouble(ExpectToken(in, "reweight_exponent"), "reweight_exponent");
  Matrix sv = ReadMatrix(in, "singular_values");
  model.singular_values = sv.transpose();
  model.w_src = ReadMatrix(in, "w_src");
  model.w_tgt = ReadMatrix(in, "w_tgt");
  if (whitening == "1") {
    model.whitening_src = ReadMatrix(in, "whitening_src");
    model.whitening_tgt = ReadMatrix(in, "whitening_tgt");
  }
  auto check = [dim](const Matrix& m, std::string_view name) {
    if (m.rows() != dim || m.cols() != dim) {
      throw FormatError(std::string(name) + " is not " + std::to_string(dim) +
                        "x" + std::to_string(dim));
    }
  };
  check(model.w_src, "w_src");
  check(model.w_tgt, "w_tgt");
  if (model.whitened()) {
    check(*model.whitening_src, "whitening_src");
    check(*model.whitening_tgt, "whitening_tgt");
  }
  if (model.singular_values.size() != dim) {
    throw FormatError("singular_values has the wrong length");
  }
  return model;
}

void SaveAlignmentModel(const AlignmentModel& model,
                        const std::filesystem::path& path) {
  std::ostringstream ss;
  WriteAlignmentModel(model, ss);
  WriteFile(path, ss.str());
}

AlignmentModel LoadAlignmentModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return ReadAlignmentModel(in);
}

}  // namespace domlex
