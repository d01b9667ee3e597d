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

// Per-word average anchors of contextual representations and their
// cross-lingual alignment.
//
// Occurrence dump format (one file per language, produced by the extractor):
//
//   #dim <d> layer <L>
//   <word>\t<sentence_id>\t<v1> <v2> ... <vd>
//
// One record per token occurrence; a word repeated within a sentence yields
// one record per repetition.

#ifndef DOMLEX_CONTEXT_ANCHOR_H_
#define DOMLEX_CONTEXT_ANCHOR_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "domlex/embedding_store.h"
#include "domlex/static_align.h"

namespace domlex {

inline constexpr size_t kDefaultMaxContexts = 10;

struct OccurrenceRecord {
  std::string word;
  uint64_t sentence_id = 0;
};

struct OccurrenceDump {
  size_t dim = 0;
  int64_t layer = 0;
  std::vector<OccurrenceRecord> records;
  Matrix vectors;  // one row per record

  size_t size() const { return records.size(); }
  // Record positions of `word`, in dump order.
  std::vector<size_t> OccurrencesOf(const std::string& word) const;
  void Validate() const;
};

OccurrenceDump ParseOccurrenceDump(std::istream& in,
                                   std::string_view source_name = "<stream>");
OccurrenceDump LoadOccurrenceDump(const std::filesystem::path& path);
void WriteOccurrenceDump(const OccurrenceDump& dump, std::ostream& out);
void SaveOccurrenceDump(const OccurrenceDump& dump,
                        const std::filesystem::path& path);

// Positions (into 0..occurrences-1) of a uniform sample of `max_contexts`
// distinct occurrences, drawn by a partial Fisher-Yates shuffle keyed by
// (seed, word), returned in ascending order. All positions when
// occurrences <= max_contexts.
std::vector<size_t> SampleOccurrences(size_t occurrences, size_t max_contexts,
                                      uint64_t seed, const std::string& word);

// Mean of the word's sampled occurrence vectors.
Vector AverageAnchor(const std::string& word, const OccurrenceDump& dump,
                     size_t max_contexts, uint64_t seed);

struct AnchorTable {
  EmbeddingSpace space;  // kind kContextualAnchor, vocabulary order preserved
  std::map<std::string, size_t> occurrence_counts;  // p per anchored word
  std::map<std::string, size_t> contexts_used;      // min(p, max_contexts)
  std::vector<std::string> unanchored;  // vocabulary words absent from the dump
};

AnchorTable BuildAnchorTable(const OccurrenceDump& dump, const Vocabulary& vocab,
                             size_t max_contexts = kDefaultMaxContexts,
                             uint64_t seed = 0);

// Vocabulary of every distinct dump word, in first-occurrence order.
Vocabulary DumpVocabulary(const OccurrenceDump& dump);

struct AlignedAnchors {
  EmbeddingSpace src_mapped;
  EmbeddingSpace tgt_mapped;
  AlignmentModel model;
};

// Self-learning alignment of the two anchor spaces, then both mapped.
AlignedAnchors AlignAnchors(const AnchorTable& src, const AnchorTable& tgt,
                            const SelfLearnConfig& config,
                            SelfLearnTrace* trace = nullptr);

// Extractor coverage sidecar: "<word>\t<records_emitted>\t<occurrences_found>".
struct CoverageEntry {
  std::string word;
  size_t records_emitted = 0;
  size_t occurrences_found = 0;
};

std::vector<CoverageEntry> LoadCoverage(const std::filesystem::path& path);

// Problems found when checking a dump against its sidecar and the
// per-word record cap; empty means consistent.
std::vector<std::string> CheckCoverage(const OccurrenceDump& dump,
                                       const std::vector<CoverageEntry>& coverage,
                                       size_t max_records_per_word);

}  // namespace domlex

#endif  // DOMLEX_CONTEXT_ANCHOR_H_
