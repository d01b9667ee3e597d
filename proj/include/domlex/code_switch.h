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

// Code-switched corpus preparation: dictionary-based token replacement with
// sentence, word and domain-ratio controls.
//
// A word x is general when F_G(x)/G >= F_D(x)/D (relative frequency in the
// general corpus at least its relative frequency in the domain corpus) and
// a domain word otherwise.
//
// Per sentence a uniform draw r decides the path:
//   r < alpha   random path: every dictionary-covered token is replaced
//               independently with probability beta.
//   otherwise   strategy path: if the domain-word ratio of the sentence is
//               >= gamma every covered token is replaced; below the
//               threshold the sentence is kept (or, with
//               StrategyFallback::kRandom, gets the random-path rule).

#ifndef DOMLEX_CODE_SWITCH_H_
#define DOMLEX_CODE_SWITCH_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "domlex/embedding_store.h"

namespace domlex {

struct FrequencyTable {
  std::unordered_map<std::string, uint64_t> general_counts;
  std::unordered_map<std::string, uint64_t> domain_counts;
  uint64_t general_total = 0;
  uint64_t domain_total = 0;

  uint64_t GeneralCount(const std::string& word) const;
  uint64_t DomainCount(const std::string& word) const;

  // Totals match the counts and both are positive.
  void Validate() const;
  bool operator==(const FrequencyTable&) const = default;
};

// Streaming whitespace-token counter.
class FrequencyTableBuilder {
 public:
  void AddGeneral(std::string_view sentence);
  void AddDomain(std::string_view sentence);
  // Throws InvalidArgumentError if either corpus contributed no tokens.
  FrequencyTable Build() const;

 private:
  FrequencyTable table_;
};

FrequencyTable BuildFrequencyTable(const std::vector<std::string>& general,
                                   const std::vector<std::string>& domain);
FrequencyTable BuildFrequencyTableFromFiles(const std::filesystem::path& general,
                                            const std::filesystem::path& domain);

enum class WordClass { kGeneral, kDomain };

// Exact integer comparison F_G * D >= F_D * G; unseen words count 0.
WordClass ClassifyWord(const std::string& word, const FrequencyTable& table);

// Fraction of tokens classified as domain words; throws on an empty sentence.
double DomainRatio(const std::vector<std::string_view>& tokens,
                   const FrequencyTable& table);

enum class StrategyFallback { kKeep, kRandom };

std::string_view ToString(StrategyFallback fallback);
StrategyFallback ParseStrategyFallback(std::string_view name);

struct CodeSwitchConfig {
  double alpha = 0.5;  // sentence replace ratio
  double beta = 0.5;   // word replacement ratio
  double gamma = 1.0;  // domain-ratio threshold
  uint64_t rng_seed = 0;
  StrategyFallback strategy_fallback = StrategyFallback::kKeep;

  void Validate() const;
};

struct SwitchReport {
  uint64_t sentences_seen = 0;
  uint64_t sentences_random_path = 0;
  uint64_t sentences_full_path = 0;  // strategy path at or above gamma
  uint64_t tokens_total = 0;
  uint64_t tokens_dictionary_covered = 0;
  uint64_t tokens_replaced = 0;

  bool operator==(const SwitchReport&) const = default;
};

std::string FormatSwitchReport(const SwitchReport& report,
                               const CodeSwitchConfig& config);

class CodeSwitcher {
 public:
  // The dictionary must be nonempty; config is validated.
  CodeSwitcher(const BilingualDictionary& dict, const FrequencyTable& table,
               const CodeSwitchConfig& config);

  // Rewrites one sentence. Randomness depends only on (seed, sentence index,
  // token index), so streaming and batch runs agree. Separators between
  // tokens are preserved byte for byte.
  std::string SwitchSentence(std::string_view sentence, uint64_t sentence_index,
                             SwitchReport* report = nullptr) const;

 private:
  const BilingualDictionary& dict_;
  const FrequencyTable& table_;
  CodeSwitchConfig config_;
  // Dictionary targets by source in a stable order for seeded picking.
  std::unordered_map<std::string, std::vector<std::string>> targets_;
};

std::pair<std::vector<std::string>, SwitchReport> SwitchCorpus(
    const std::vector<std::string>& corpus, const BilingualDictionary& dict,
    const FrequencyTable& table, const CodeSwitchConfig& config);

// Line-by-line streaming variant; every output line is '\n' terminated.
SwitchReport SwitchStream(std::istream& in, std::ostream& out,
                          const BilingualDictionary& dict,
                          const FrequencyTable& table,
                          const CodeSwitchConfig& config);

}  // namespace domlex

#endif  // DOMLEX_CODE_SWITCH_H_
