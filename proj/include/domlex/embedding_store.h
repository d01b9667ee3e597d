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

// Dense word-embedding spaces and bilingual dictionaries: loading,
// validation, normalization and saving.

#ifndef DOMLEX_EMBEDDING_STORE_H_
#define DOMLEX_EMBEDDING_STORE_H_

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace domlex {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class SpaceKind { kStatic, kContextualAnchor };

enum class NormStep { kUnit, kCenter };

enum class NormScheme { kUnit, kCenter, kUnitCenterUnit };

std::vector<NormStep> StepsOf(NormScheme scheme);
std::string_view ToString(NormScheme scheme);
NormScheme ParseNormScheme(std::string_view name);
std::string_view ToString(SpaceKind kind);

// Ordered set of unique tokens with O(1) reverse lookup.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws InvalidArgumentError on a duplicate token.
  explicit Vocabulary(std::vector<std::string> words);

  // Returns false (and does nothing) if the word is already present.
  bool Add(std::string word);

  std::optional<size_t> Find(const std::string& word) const;
  bool Contains(const std::string& word) const { return index_.count(word) > 0; }
  const std::string& Word(size_t i) const { return words_.at(i); }
  const std::vector<std::string>& words() const { return words_; }
  size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, size_t> index_;
};

struct EmbeddingSpace {
  Vocabulary vocab;
  Matrix matrix;
  SpaceKind kind = SpaceKind::kStatic;
  std::vector<NormStep> normalization_history;

  size_t size() const { return vocab.size(); }
  size_t dim() const { return static_cast<size_t>(matrix.cols()); }

  // Throws if the row count disagrees with the vocabulary or an entry is not
  // finite.
  void Validate() const;
};

// Builds a space from words and a matching matrix; validates.
EmbeddingSpace MakeSpace(std::vector<std::string> words, Matrix matrix,
                         SpaceKind kind = SpaceKind::kStatic);

struct LoadStats {
  size_t duplicates_dropped = 0;
};

// Text vector format: "<count> <dim>" header, then "<word> <v1> ... <vdim>".
EmbeddingSpace ParseEmbeddings(std::istream& in,
                               std::optional<size_t> expected_dim = std::nullopt,
                               LoadStats* stats = nullptr,
                               std::string_view source_name = "<stream>");
EmbeddingSpace LoadEmbeddings(const std::filesystem::path& path,
                              std::optional<size_t> expected_dim = std::nullopt,
                              LoadStats* stats = nullptr);
void WriteEmbeddings(const EmbeddingSpace& space, std::ostream& out);
void SaveEmbeddings(const EmbeddingSpace& space,
                    const std::filesystem::path& path);

// In-place row/column normalization of a bare matrix.
void ApplyNormStep(Matrix& m, NormStep step);

// Returns a normalized copy with the steps appended to its history.
EmbeddingSpace Normalize(const EmbeddingSpace& space, NormScheme scheme);

// True if the space's history already ends with the steps of `scheme`.
bool IsNormalizedWith(const EmbeddingSpace& space, NormScheme scheme);

// Source word -> nonempty set of acceptable target words.
class BilingualDictionary {
 public:
  explicit BilingualDictionary(std::string name = "gold")
      : name_(std::move(name)) {}

  // Throws InvalidArgumentError on an empty token or embedded whitespace.
  void Add(const std::string& source, const std::string& target);

  // nullptr if the source is absent.
  const std::set<std::string>* Find(const std::string& source) const;

  const std::map<std::string, std::set<std::string>>& entries() const {
    return entries_;
  }
  const std::string& name() const { return name_; }
  size_t size() const { return entries_.size(); }
  size_t pair_count() const;
  bool empty() const { return entries_.empty(); }

 private:
  std::string name_;
  std::map<std::string, std::set<std::string>> entries_;
};

// "<source>\t<target>" per line; blank lines are skipped.
BilingualDictionary ParseDictionary(std::istream& in, std::string name = "gold",
                                    std::string_view source_name = "<stream>");
BilingualDictionary LoadDictionary(const std::filesystem::path& path,
                                   std::string name = "gold");
void SaveDictionary(const BilingualDictionary& dict,
                    const std::filesystem::path& path);

}  // namespace domlex

#endif  // DOMLEX_EMBEDDING_STORE_H_
