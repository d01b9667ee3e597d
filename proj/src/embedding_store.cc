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

#include "domlex/embedding_store.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "domlex/error.h"
#include "domlex/text_util.h"

namespace domlex {

std::vector<NormStep> StepsOf(NormScheme scheme) {
  switch (scheme) {
    case NormScheme::kUnit:
      return {NormStep::kUnit};
    case NormScheme::kCenter:
      return {NormStep::kCenter};
    case NormScheme::kUnitCenterUnit:
      return {NormStep::kUnit, NormStep::kCenter, NormStep::kUnit};
  }
  return {};
}

std::string_view ToString(NormScheme scheme) {
  switch (scheme) {
    case NormScheme::kUnit:
      return "unit";
    case NormScheme::kCenter:
      return "center";
    case NormScheme::kUnitCenterUnit:
      return "unit-center-unit";
  }
  return "?";
}

NormScheme ParseNormScheme(std::string_view name) {
  if (name == "unit") return NormScheme::kUnit;
  if (name == "center") return NormScheme::kCenter;
  if (name == "unit-center-unit") return NormScheme::kUnitCenterUnit;
  throw InvalidArgumentError("unknown normalization scheme '" +
                             std::string(name) + "'");
}

std::string_view ToString(SpaceKind kind) {
  return kind == SpaceKind::kStatic ? "static" : "contextual-anchor";
}

Vocabulary::Vocabulary(std::vector<std::string> words) {
  words_.reserve(words.size());
  for (auto& w : words) {
    if (Contains(w)) throw InvalidArgumentError("duplicate token '" + w + "'");
    Add(std::move(w));
  }
}

bool Vocabulary::Add(std::string word) {
  auto [it, inserted] = index_.emplace(word, words_.size());
  if (!inserted) return false;
  words_.push_back(std::move(word));
  return true;
}

std::optional<size_t> Vocabulary::Find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingSpace::Validate() const {
  if (static_cast<size_t>(matrix.rows()) != vocab.size()) {
    throw InvalidArgumentError("matrix has " + std::to_string(matrix.rows()) +
                               " rows but vocabulary has " +
                               std::to_string(vocab.size()) + " words");
  }
  if (!matrix.allFinite()) {
    throw NumericalError("embedding matrix contains non-finite entries");
  }
}

EmbeddingSpace MakeSpace(std::vector<std::string> words, Matrix matrix,
                         SpaceKind kind) {
  EmbeddingSpace space;
  space.vocab = Vocabulary(std::move(words));
  space.matrix = std::move(matrix);
  space.kind = kind;
  space.Validate();
  return space;
}

EmbeddingSpace ParseEmbeddings(std::istream& in,
                               std::optional<size_t> expected_dim,
                               LoadStats* stats, std::string_view source_name) {
  const std::string where(source_name);
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(where + ": missing header line");
  }
  auto header = SplitWhitespace(line);
  if (header.size() != 2) {
    throw FormatError(where + ": malformed header '" + line +
                      "', expected '<count> <dim>'");
  }
  const int64_t count = ParseInt(header[0], where + " header count");
  const int64_t dim = ParseInt(header[1], where + " header dim");
  if (count < 0 || dim <= 0) {
    throw FormatError(where + ": malformed header '" + line + "'");
  }
  if (expected_dim && static_cast<size_t>(dim) != *expected_dim) {
    throw FormatError(where + ": dimension " + std::to_string(dim) +
                      " does not match expected " +
                      std::to_string(*expected_dim));
  }

  std::vector<std::string> words;
  std::vector<double> values;
  words.reserve(static_cast<size_t>(count));
  values.reserve(static_cast<size_t>(count * dim));
  std::unordered_map<std::string, bool> seen;
  size_t duplicates = 0;
  int64_t rows = 0;
  int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (rows == count) {
      throw FormatError(where + ":" + std::to_string(line_no) +
                        ": more rows than the header count " +
                        std::to_string(count));
    }
    ++rows;
    auto fields = SplitWhitespace(line);
    if (fields.size() != static_cast<size_t>(dim) + 1) {
      throw FormatError(where + ":" + std::to_string(line_no) +
                        ": row arity mismatch, expected " +
                        std::to_string(dim) + " values, got " +
                        std::to_string(fields.empty() ? 0 : fields.size() - 1));
    }
    std::string word(fields[0]);
    const bool duplicate = !seen.emplace(word, true).second;
    const std::string ctx = where + ":" + std::to_string(line_no);
    for (size_t k = 1; k < fields.size(); ++k) {
      double v = ParseDouble(fields[k], ctx);
      if (!duplicate) values.push_back(v);
    }
    if (duplicate) {
      ++duplicates;
      continue;
    }
    words.push_back(std::move(word));
  }
  if (rows != count) {
    throw FormatError(where + ": header announces " + std::to_string(count) +
                      " rows but file has " + std::to_string(rows));
  }
  if (stats) stats->duplicates_dropped = duplicates;

  Matrix m(static_cast<Eigen::Index>(words.size()), dim);
  if (!values.empty()) {
    m = Eigen::Map<const Matrix>(values.data(), m.rows(), m.cols());
  }
  return MakeSpace(std::move(words), std::move(m));
}

EmbeddingSpace LoadEmbeddings(const std::filesystem::path& path,
                              std::optional<size_t> expected_dim,
                              LoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return ParseEmbeddings(in, expected_dim, stats, path.string());
}

void WriteEmbeddings(const EmbeddingSpace& space, std::ostream& out) {
  space.Validate();
  out << space.size() << ' ' << space.dim() << '\n';
  std::string line;
  for (size_t i = 0; i < space.size(); ++i) {
    line = space.vocab.Word(i);
    for (Eigen::Index j = 0; j < space.matrix.cols(); ++j) {
      line.push_back(' ');
      line += FormatDouble(space.matrix(static_cast<Eigen::Index>(i), j));
    }
    line.push_back('\n');
    out << line;
  }
}

void SaveEmbeddings(const EmbeddingSpace& space,
                    const std::filesystem::path& path) {
  std::ostringstream ss;
  WriteEmbeddings(space, ss);
  WriteFile(path, ss.str());
}

void ApplyNormStep(Matrix& m, NormStep step) {
  switch (step) {
    case NormStep::kUnit: {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double norm = m.row(i).norm();
        if (norm == 0.0) {
          throw NumericalError("zero-norm row " + std::to_string(i) +
                               " under unit normalization");
        }
        m.row(i) /= norm;
      }
      break;
    }
    case NormStep::kCenter: {
      if (m.rows() == 0) return;
      Eigen::RowVectorXd mean = m.colwise().mean();
      m.rowwise() -= mean;
      break;
    }
  }
}

EmbeddingSpace Normalize(const EmbeddingSpace& space, NormScheme scheme) {
  if (space.matrix.rows() == 0) {
    throw InvalidArgumentError("cannot normalize an empty space");
  }
  EmbeddingSpace out = space;
  for (NormStep step : StepsOf(scheme)) {
    ApplyNormStep(out.matrix, step);
    out.normalization_history.push_back(step);
  }
  return out;
}

bool IsNormalizedWith(const EmbeddingSpace& space, NormScheme scheme) {
  const auto steps = StepsOf(scheme);
  const auto& hist = space.normalization_history;
  if (hist.size() < steps.size()) return false;
  return std::equal(steps.begin(), steps.end(), hist.end() - steps.size());
}

void BilingualDictionary::Add(const std::string& source,
                              const std::string& target) {
  if (source.empty() || target.empty()) {
    throw InvalidArgumentError("dictionary entries must be nonempty");
  }
  if (HasWhitespace(source) || HasWhitespace(target)) {
    throw InvalidArgumentError("dictionary token contains whitespace: '" +
                               source + "' -> '" + target + "'");
  }
  entries_[source].insert(target);
}

const std::set<std::string>* BilingualDictionary::Find(
    const std::string& source) const {
  auto it = entries_.find(source);
  return it == entries_.end() ? nullptr : &it->second;
}

size_t BilingualDictionary::pair_count() const {
  size_t n = 0;
  for (const auto& [src, tgts] : entries_) n += tgts.size();
  return n;
}

BilingualDictionary ParseDictionary(std::istream& in, std::string name,
                                    std::string_view source_name) {
  BilingualDictionary dict(std::move(name));
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (SplitWhitespace(line).empty()) continue;
    const std::string ctx =
        std::string(source_name) + ":" + std::to_string(line_no);
    auto fields = SplitExact(line, '\t');
    if (fields.size() != 2) {
      throw FormatError(ctx + ": expected exactly one tab, got '" + line + "'");
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw FormatError(ctx + ": empty dictionary field");
    }
    try {
      dict.Add(std::string(fields[0]), std::string(fields[1]));
    } catch (const InvalidArgumentError& e) {
      throw FormatError(ctx + ": " + e.what());
    }
  }
  return dict;
}

BilingualDictionary LoadDictionary(const std::filesystem::path& path,
                                   std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return ParseDictionary(in, std::move(name), path.string());
}

void SaveDictionary(const BilingualDictionary& dict,
                    const std::filesystem::path& path) {
  std::string out;
  for (const auto& [src, tgts] : dict.entries()) {
    for (const auto& t : tgts) {
      out += src;
      out.push_back('\t');
      out += t;
      out.push_back('\n');
    }
  }
  WriteFile(path, out);
}

}  // namespace domlex
