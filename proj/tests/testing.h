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

// Fixtures and brute-force reference implementations shared by the unit
// tests and the acceptance runner. The references deliberately avoid the
// library's own numerical helpers.

#ifndef DOMLEX_TESTS_TESTING_H_
#define DOMLEX_TESTS_TESTING_H_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unistd.h>
#include <vector>

#include <Eigen/Dense>

#include "domlex/context_anchor.h"
#include "domlex/embedding_store.h"
#include "domlex/random.h"
#include "domlex/retrieval.h"

namespace domlex::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("domlex_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline Matrix RandomGaussian(Eigen::Index rows, Eigen::Index cols,
                             uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.Normal();
  }
  return m;
}

inline Matrix RandomOrthogonal(Eigen::Index d, uint64_t seed) {
  Eigen::MatrixXd a = RandomGaussian(d, d, seed);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  // Fix column signs so the draw is Haar distributed.
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

inline std::vector<std::string> Words(const std::string& prefix, size_t n) {
  std::vector<std::string> w;
  for (size_t i = 0; i < n; ++i) w.push_back(prefix + std::to_string(i));
  return w;
}

// Target row perm[i] holds the image of source word i.
struct RotationFixture {
  EmbeddingSpace src;
  EmbeddingSpace tgt;
  BilingualDictionary gold;
  Matrix rotation;
  std::vector<size_t> perm;
};

inline RotationFixture MakeRotationFixture(size_t n, size_t d, uint64_t seed,
                                           double noise = 0.0) {
  RotationFixture f;
  const auto nn = static_cast<Eigen::Index>(n);
  const auto dd = static_cast<Eigen::Index>(d);
  Matrix x = RandomGaussian(nn, dd, seed);
  f.rotation = RandomOrthogonal(dd, seed ^ 0x9e3779b97f4a7c15ULL);
  Matrix z = x * f.rotation;
  if (noise > 0) z += noise * RandomGaussian(nn, dd, seed + 17);

  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  SplitMix64 rng(seed + 3);
  for (size_t i = n; i > 1; --i) {
    std::swap(f.perm[i - 1], f.perm[rng.Below(i)]);
  }
  Matrix zp(nn, dd);
  std::vector<std::string> tgt_words(n);
  for (size_t i = 0; i < n; ++i) {
    zp.row(static_cast<Eigen::Index>(f.perm[i])) = z.row(static_cast<Eigen::Index>(i));
    tgt_words[f.perm[i]] = "t" + std::to_string(i);
  }
  f.src = MakeSpace(Words("s", n), x);
  f.tgt = MakeSpace(tgt_words, zp);
  for (size_t i = 0; i < n; ++i) {
    f.gold.Add("s" + std::to_string(i), "t" + std::to_string(i));
  }
  return f;
}

// Plain-loop cosine.
inline double NaiveCosine(const Matrix& a, Eigen::Index i, const Matrix& b,
                          Eigen::Index j) {
  double dot = 0, na = 0, nb = 0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    dot += a(i, c) * b(j, c);
    na += a(i, c) * a(i, c);
    nb += b(j, c) * b(j, c);
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// O(n^2) CSLS straight from the definition on raw (unnormalized) rows.
inline Matrix BruteForceCsls(const Matrix& x, const Matrix& y, size_t k) {
  const Eigen::Index n = x.rows(), m = y.rows();
  Matrix cos(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) cos(i, j) = NaiveCosine(x, i, y, j);
  }
  auto top_mean = [k](std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    double s = 0;
    for (size_t t = 0; t < k; ++t) s += v[t];
    return s / static_cast<double>(k);
  };
  std::vector<double> r_t(n), r_s(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> v(m);
    for (Eigen::Index j = 0; j < m; ++j) v[j] = cos(i, j);
    r_t[i] = top_mean(v);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    std::vector<double> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cos(i, j);
    r_s[j] = top_mean(v);
  }
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out(i, j) = 2 * cos(i, j) - r_t[i] - r_s[j];
    }
  }
  return out;
}

// Orthogonal polar factor of a square nonsingular matrix by Newton
// iteration X <- (X + X^-T) / 2, independent of any SVD.
inline Matrix PolarFactor(const Matrix& m) {
  Eigen::MatrixXd x = m;
  for (int it = 0; it < 100; ++it) {
    Eigen::MatrixXd next = 0.5 * (x + x.inverse().transpose());
    const double delta = (next - x).norm();
    x = next;
    if (delta < 1e-14) break;
  }
  return x;
}

// Textbook Fisher-Yates on a materialized array, first m slots.
inline std::vector<uint64_t> NaiveFisherYates(uint64_t n, size_t m,
                                              SplitMix64& rng) {
  std::vector<uint64_t> a(n);
  std::iota(a.begin(), a.end(), 0);
  for (uint64_t i = 0; i < m; ++i) {
    const uint64_t j = i + rng.Below(n - i);
    std::swap(a[i], a[j]);
  }
  a.resize(m);
  return a;
}

// Lines s_j + lambda * a_j: index of the maximum at `lambda`, ties toward the
// lower index.
inline size_t EnvelopeArgmax(const std::vector<double>& s,
                             const std::vector<double>& a, double lambda) {
  size_t best = 0;
  for (size_t j = 1; j < s.size(); ++j) {
    if (s[j] + lambda * a[j] > s[best] + lambda * a[best]) best = j;
  }
  return best;
}

// Every lambda where two of the lines intersect.
inline std::vector<double> Crossovers(const std::vector<double>& s,
                                      const std::vector<double>& a) {
  std::vector<double> out;
  for (size_t i = 0; i < s.size(); ++i) {
    for (size_t j = i + 1; j < s.size(); ++j) {
      if (a[i] != a[j]) out.push_back((s[j] - s[i]) / (a[i] - a[j]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Word i gets `counts[i]` records scattered around center row i; records
// are interleaved across words the way an extractor walking a corpus would
// emit them.
inline OccurrenceDump MakeDump(const std::vector<std::string>& words,
                               const Matrix& centers,
                               const std::vector<size_t>& counts, double noise,
                               uint64_t seed, int64_t layer = 1) {
  OccurrenceDump dump;
  dump.dim = static_cast<size_t>(centers.cols());
  dump.layer = layer;
  std::vector<Eigen::RowVectorXd> rows;
  SplitMix64 rng(seed);
  size_t max_count = 0;
  for (size_t c : counts) max_count = std::max(max_count, c);
  uint64_t sentence = 0;
  for (size_t round = 0; round < max_count; ++round) {
    for (size_t i = 0; i < words.size(); ++i) {
      if (round >= counts[i]) continue;
      Eigen::RowVectorXd v = centers.row(static_cast<Eigen::Index>(i));
      for (Eigen::Index c = 0; c < v.size(); ++c) v(c) += noise * rng.Normal();
      dump.records.push_back({words[i], sentence++});
      rows.push_back(v);
    }
  }
  dump.vectors.resize(static_cast<Eigen::Index>(rows.size()), centers.cols());
  for (size_t r = 0; r < rows.size(); ++r) {
    dump.vectors.row(static_cast<Eigen::Index>(r)) = rows[r];
  }
  return dump;
}

// Round-trip accuracy per lambda computed from raw vectors: a word counts
// when x -> argmax_y [cos(u_x,u_y) + l cos(a_x,a_y)] -> argmax_x' [same
// from y] returns x. Every word has an anchor; rows of the source and anchor
// matrices correspond.
struct RoundTripOracle {
  std::vector<double> scores;
  double best_lambda = 0.0;
};

inline RoundTripOracle OracleRoundTrip(const Matrix& us, const Matrix& ut,
                                       const Matrix& as, const Matrix& at,
                                       const std::vector<double>& grid) {
  const Eigen::Index n = us.rows(), m = ut.rows();
  Matrix su(n, m), sa(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      su(i, j) = NaiveCosine(us, i, ut, j);
      sa(i, j) = NaiveCosine(as, i, at, j);
    }
  }
  RoundTripOracle out;
  size_t best_hits = 0;
  for (size_t g = 0; g < grid.size(); ++g) {
    const double l = grid[g];
    size_t hits = 0;
    for (Eigen::Index x = 0; x < n; ++x) {
      Eigen::Index y = 0;
      for (Eigen::Index j = 1; j < m; ++j) {
        if (su(x, j) + l * sa(x, j) > su(x, y) + l * sa(x, y)) y = j;
      }
      Eigen::Index back = 0;
      for (Eigen::Index i = 1; i < n; ++i) {
        if (su(i, y) + l * sa(i, y) > su(back, y) + l * sa(back, y)) back = i;
      }
      hits += back == x;
    }
    out.scores.push_back(static_cast<double>(hits) / static_cast<double>(n));
    if (g == 0 || hits > best_hits) {
      best_hits = hits;
      out.best_lambda = l;
    }
  }
  return out;
}

// Static spaces for spring training: target row i is source row i pushed
// through a fixed random rotation, so translations start far apart and a
// learned map can pull them together.
struct SpringTask {
  EmbeddingSpace src;
  EmbeddingSpace tgt;
  InducedDictionary induced;
};

inline SpringTask MakeSpringTask(size_t n, size_t d, uint64_t seed,
                                 double mix = 0.8) {
  const auto nn = static_cast<Eigen::Index>(n);
  const auto dd = static_cast<Eigen::Index>(d);
  Matrix x = RandomGaussian(nn, dd, seed);
  for (Eigen::Index i = 0; i < nn; ++i) x.row(i).normalize();
  const Matrix r = RandomOrthogonal(dd, seed + 1);
  Matrix z = (1.0 - mix) * x + mix * (x * r);
  for (Eigen::Index i = 0; i < nn; ++i) z.row(i).normalize();
  SpringTask task;
  task.src = MakeSpace(Words("s", n), x);
  task.tgt = MakeSpace(Words("t", n), z);
  task.induced.source_size = task.induced.target_size = n;
  for (size_t i = 0; i < n; ++i) task.induced.pairs.push_back({i, i, 1.0});
  return task;
}

struct PairCosines {
  double positive = 0.0;
  double negative = 0.0;
};

// Mean cosine of induced pairs and of the given negatives, unified rows.
inline PairCosines MeanPairCosines(const Matrix& src, const Matrix& tgt,
                                   const InducedDictionary& induced,
                                   const std::vector<std::vector<size_t>>& negatives) {
  PairCosines out;
  size_t neg_count = 0;
  for (size_t i = 0; i < induced.pairs.size(); ++i) {
    const auto s = static_cast<Eigen::Index>(induced.pairs[i].source);
    out.positive += NaiveCosine(src, s, tgt, static_cast<Eigen::Index>(induced.pairs[i].target));
    for (size_t j : negatives[i]) {
      out.negative += NaiveCosine(src, s, tgt, static_cast<Eigen::Index>(j));
      ++neg_count;
    }
  }
  out.positive /= static_cast<double>(induced.pairs.size());
  out.negative /= static_cast<double>(neg_count);
  return out;
}

struct PipelineFixtureOptions {
  size_t words = 200;
  size_t dim = 10;
  size_t anchor_dim = 6;
  bool anchors = true;
  bool validation = true;
  uint64_t seed = 1;
  size_t spring_epochs = 3;
};

// Writes a rotated static pair, a gold dictionary, optional occurrence dumps
// whose anchors are related by a second rotation, and a config.ini that
// points at all of them. Returns the config path.
inline fs::path WritePipelineFixture(const fs::path& dir,
                                     const PipelineFixtureOptions& o) {
  fs::create_directories(dir);
  const auto f = MakeRotationFixture(o.words, o.dim, o.seed);
  SaveEmbeddings(f.src, dir / "src.vec");
  SaveEmbeddings(f.tgt, dir / "tgt.vec");
  SaveDictionary(f.gold, dir / "gold.tsv");
  std::string config =
      "[paths]\n"
      "source_vectors = src.vec\n"
      "target_vectors = tgt.vec\n"
      "gold_dictionary = gold.tsv\n"
      "output_dir = out\n";
  if (o.anchors) {
    const auto n = static_cast<Eigen::Index>(o.words);
    const auto da = static_cast<Eigen::Index>(o.anchor_dim);
    const Matrix centers = RandomGaussian(n, da, o.seed + 50);
    const Matrix q = RandomOrthogonal(da, o.seed + 51);
    std::vector<size_t> counts(o.words);
    SplitMix64 rng(o.seed + 52);
    for (auto& c : counts) c = 1 + rng.Below(15);
    // Leave a few words without any occurrence.
    counts[o.words - 1] = 0;
    const Matrix tgt_centers = centers * q;
    const auto dump_s = MakeDump(Words("s", o.words), centers, counts, 0.05, o.seed + 53);
    const auto dump_t = MakeDump(Words("t", o.words), tgt_centers, counts, 0.05, o.seed + 54);
    SaveOccurrenceDump(dump_s, dir / "src.dump");
    SaveOccurrenceDump(dump_t, dir / "tgt.dump");
    config += "source_dump = src.dump\ntarget_dump = tgt.dump\n";
  }
  if (o.validation) {
    std::string words;
    for (size_t i = 0; i < std::min<size_t>(o.words, 60); ++i) {
      words += "s" + std::to_string(i) + "\n";
    }
    WriteText(dir / "validation.txt", words);
    config += "validation_words = validation.txt\n";
  }
  config += "\n[run]\nseed = 7\n\n[spring]\nepochs = " +
            std::to_string(o.spring_epochs) + "\nnegatives = 5\n";
  WriteText(dir / "config.ini", config);
  return dir / "config.ini";
}

}  // namespace domlex::testing

#endif  // DOMLEX_TESTS_TESTING_H_
