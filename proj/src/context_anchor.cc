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

#include "domlex/context_anchor.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "domlex/error.h"
#include "domlex/random.h"
#include "domlex/text_util.h"

namespace domlex {

std::vector<size_t> OccurrenceDump::OccurrencesOf(const std::string& word) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < records.size(); ++i) {
    if (records[i].word == word) out.push_back(i);
  }
  return out;
}

void OccurrenceDump::Validate() const {
  if (static_cast<size_t>(vectors.rows()) != records.size() ||
      (vectors.rows() > 0 && static_cast<size_t>(vectors.cols()) != dim)) {
    throw InvalidArgumentError("occurrence dump shape mismatch");
  }
  if (!vectors.allFinite()) {
    throw NumericalError("occurrence dump has non-finite values");
  }
}

OccurrenceDump ParseOccurrenceDump(std::istream& in,
                                   std::string_view source_name) {
  const std::string where(source_name);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(where + ": empty dump");
  auto header = SplitWhitespace(line);
  if (header.size() != 4 || header[0] != "#dim" || header[2] != "layer") {
    throw FormatError(where + ": malformed header '" + line +
                      "', expected '#dim <d> layer <L>'");
  }
  OccurrenceDump dump;
  const int64_t dim = ParseInt(header[1], where + " header dim");
  if (dim <= 0) throw FormatError(where + ": dimension must be positive");
  dump.dim = static_cast<size_t>(dim);
  dump.layer = ParseInt(header[3], where + " header layer");

  std::vector<double> values;
  int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string ctx = where + ":" + std::to_string(line_no);
    auto fields = SplitExact(line, '\t');
    if (fields.size() != 3 || fields[0].empty()) {
      throw FormatError(ctx + ": expected '<word>\\t<sentence_id>\\t<values>'");
    }
    if (HasWhitespace(fields[0])) {
      throw FormatError(ctx + ": word contains whitespace");
    }
    const int64_t sid = ParseInt(fields[1], ctx + " sentence id");
    if (sid < 0) throw FormatError(ctx + ": negative sentence id");
    auto vals = SplitExact(fields[2], ' ');
    if (vals.size() != dump.dim) {
      throw FormatError(ctx + ": expected " + std::to_string(dump.dim) +
                        " values, got " + std::to_string(vals.size()));
    }
    for (auto v : vals) values.push_back(ParseDouble(v, ctx));
    dump.records.push_back({std::string(fields[0]), static_cast<uint64_t>(sid)});
  }
  dump.vectors.resize(static_cast<Eigen::Index>(dump.records.size()), dim);
  if (!values.empty()) {
    dump.vectors = Eigen::Map<const Matrix>(values.data(), dump.vectors.rows(),
                                            dump.vectors.cols());
  }
  return dump;
}

OccurrenceDump LoadOccurrenceDump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return ParseOccurrenceDump(in, path.string());
}

void WriteOccurrenceDump(const OccurrenceDump& dump, std::ostream& out) {
  dump.Validate();
  out << "#dim " << dump.dim << " layer " << dump.layer << '\n';
  std::string line;
  for (size_t i = 0; i < dump.records.size(); ++i) {
    line = dump.records[i].word;
    line.push_back('\t');
    line += std::to_string(dump.records[i].sentence_id);
    line.push_back('\t');
    for (Eigen::Index j = 0; j < dump.vectors.cols(); ++j) {
      if (j) line.push_back(' ');
      line += FormatDouble(dump.vectors(static_cast<Eigen::Index>(i), j));
    }
    line.push_back('\n');
    out << line;
  }
}

void SaveOccurrenceDump(const OccurrenceDump& dump,
                        const std::filesystem::path& path) {
  std::ostringstream ss;
  WriteOccurrenceDump(dump, ss);
  WriteFile(path, ss.str());
}

std::vector<size_t> SampleOccurrences(size_t occurrences, size_t max_contexts,
                                      uint64_t seed, const std::string& word) {
  if (max_contexts == 0) {
    throw InvalidArgumentError("max_contexts must be positive");
  }
  std::vector<size_t> picked;
  if (occurrences <= max_contexts) {
    picked.resize(occurrences);
    for (size_t i = 0; i < occurrences; ++i) picked[i] = i;
    return picked;
  }
  SplitMix64 rng(DeriveSeed(seed, {HashString(word)}));
  for (uint64_t v : SampleWithoutReplacement(occurrences, max_contexts, rng)) {
    picked.push_back(static_cast<size_t>(v));
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

namespace {

Vector MeanOf(const OccurrenceDump& dump, const std::vector<size_t>& positions,
              const std::vector<size_t>& chosen) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(dump.dim));
  for (size_t c : chosen) {
    sum += dump.vectors.row(static_cast<Eigen::Index>(positions[c])).transpose();
  }
  return sum / static_cast<double>(chosen.size());
}

}  // namespace

Vector AverageAnchor(const std::string& word, const OccurrenceDump& dump,
                     size_t max_contexts, uint64_t seed) {
  const std::vector<size_t> positions = dump.OccurrencesOf(word);
  if (positions.empty()) {
    throw InvalidArgumentError("word '" + word + "' does not occur in the dump");
  }
  return MeanOf(dump, positions,
                SampleOccurrences(positions.size(), max_contexts, seed, word));
}

Vocabulary DumpVocabulary(const OccurrenceDump& dump) {
  Vocabulary vocab;
  for (const auto& r : dump.records) vocab.Add(r.word);
  return vocab;
}

AnchorTable BuildAnchorTable(const OccurrenceDump& dump, const Vocabulary& vocab,
                             size_t max_contexts, uint64_t seed) {
  if (dump.records.empty()) {
    throw InvalidArgumentError("occurrence dump is empty");
  }
  if (max_contexts == 0) {
    throw InvalidArgumentError("max_contexts must be positive");
  }
  dump.Validate();
  std::unordered_map<std::string, std::vector<size_t>> by_word;
  for (size_t i = 0; i < dump.records.size(); ++i) {
    by_word[dump.records[i].word].push_back(i);
  }

  AnchorTable table;
  std::vector<std::string> words;
  std::vector<Vector> rows;
  for (const auto& word : vocab.words()) {
    auto it = by_word.find(word);
    if (it == by_word.end()) {
      table.unanchored.push_back(word);
      continue;
    }
    const auto& positions = it->second;
    const auto chosen =
        SampleOccurrences(positions.size(), max_contexts, seed, word);
    rows.push_back(MeanOf(dump, positions, chosen));
    words.push_back(word);
    table.occurrence_counts[word] = positions.size();
    table.contexts_used[word] = chosen.size();
  }
  if (words.empty()) {
    throw InvalidArgumentError(
        "no vocabulary word occurs in the occurrence dump");
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(dump.dim));
  for (size_t i = 0; i < rows.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  table.space = MakeSpace(std::move(words), std::move(m),
                          SpaceKind::kContextualAnchor);
  return table;
}

AlignedAnchors AlignAnchors(const AnchorTable& src, const AnchorTable& tgt,
                            const SelfLearnConfig& config,
                            SelfLearnTrace* trace) {
  if (src.space.size() == 0 || tgt.space.size() == 0) {
    throw InvalidArgumentError("anchor tables must be nonempty");
  }
  if (src.space.dim() != tgt.space.dim()) {
    throw InvalidArgumentError("anchor dimension mismatch: " +
                               std::to_string(src.space.dim()) + " vs " +
                               std::to_string(tgt.space.dim()));
  }
  const EmbeddingSpace src_norm = Normalize(src.space, config.normalization);
  const EmbeddingSpace tgt_norm = Normalize(tgt.space, config.normalization);
  AlignedAnchors out;
  out.model = SelfLearn(src_norm, tgt_norm, config, trace);
  out.src_mapped = MapSpace(src_norm, out.model, Side::kSource);
  out.tgt_mapped = MapSpace(tgt_norm, out.model, Side::kTarget);
  return out;
}

std::vector<CoverageEntry> LoadCoverage(const std::filesystem::path& path) {
  std::vector<CoverageEntry> out;
  const auto lines = ReadLines(path);
  for (size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::string ctx = path.string() + ":" + std::to_string(n + 1);
    auto fields = SplitExact(lines[n], '\t');
    if (fields.size() != 3 || fields[0].empty()) {
      throw FormatError(ctx + ": expected '<word>\\t<emitted>\\t<found>'");
    }
    const int64_t emitted = ParseInt(fields[1], ctx);
    const int64_t found = ParseInt(fields[2], ctx);
    if (emitted < 0 || found < 0) throw FormatError(ctx + ": negative count");
    out.push_back({std::string(fields[0]), static_cast<size_t>(emitted),
                   static_cast<size_t>(found)});
  }
  return out;
}

std::vector<std::string> CheckCoverage(const OccurrenceDump& dump,
                                       const std::vector<CoverageEntry>& coverage,
                                       size_t max_records_per_word) {
  std::vector<std::string> problems;
  std::map<std::string, size_t> counts;
  for (const auto& r : dump.records) ++counts[r.word];
  std::unordered_set<std::string> listed;
  for (const auto& e : coverage) {
    if (!listed.insert(e.word).second) {
      problems.push_back("word '" + e.word + "' listed twice in coverage");
      continue;
    }
    const size_t in_dump = counts.count(e.word) ? counts[e.word] : 0;
    if (in_dump != e.records_emitted) {
      problems.push_back("word '" + e.word + "': coverage says " +
                         std::to_string(e.records_emitted) +
                         " records, dump has " + std::to_string(in_dump));
    }
    if (e.records_emitted > e.occurrences_found) {
      problems.push_back("word '" + e.word +
                         "': more records emitted than occurrences found");
    }
  }
  for (const auto& [word, n] : counts) {
    if (!listed.count(word)) {
      problems.push_back("word '" + word + "' missing from coverage");
    }
    if (n > max_records_per_word) {
      problems.push_back("word '" + word + "' has " + std::to_string(n) +
                         " records, cap is " +
                         std::to_string(max_records_per_word));
    }
  }
  return problems;
}

}  // namespace domlex
