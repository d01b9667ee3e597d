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

#include "domlex/code_switch.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "domlex/error.h"
#include "domlex/random.h"
#include "domlex/text_util.h"
#include "json.hpp"

namespace domlex {
namespace {

constexpr uint64_t kSentenceDraw = 0;
constexpr uint64_t kReplaceDraw = 1;
constexpr uint64_t kChoiceDraw = 2;

void CountTokens(std::string_view sentence,
                 std::unordered_map<std::string, uint64_t>& counts,
                 uint64_t& total) {
  for (auto tok : SplitWhitespace(sentence)) {
    ++counts[std::string(tok)];
    ++total;
  }
}

struct TokenSpan {
  size_t begin;
  size_t length;
};

std::vector<TokenSpan> TokenSpans(std::string_view s) {
  std::vector<TokenSpan> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && IsSpace(s[i])) ++i;
    size_t j = i;
    while (j < s.size() && !IsSpace(s[j])) ++j;
    if (j > i) out.push_back({i, j - i});
    i = j;
  }
  return out;
}

bool InUnitInterval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

uint64_t FrequencyTable::GeneralCount(const std::string& word) const {
  auto it = general_counts.find(word);
  return it == general_counts.end() ? 0 : it->second;
}

uint64_t FrequencyTable::DomainCount(const std::string& word) const {
  auto it = domain_counts.find(word);
  return it == domain_counts.end() ? 0 : it->second;
}

void FrequencyTable::Validate() const {
  uint64_t g = 0, d = 0;
  for (const auto& [w, c] : general_counts) g += c;
  for (const auto& [w, c] : domain_counts) d += c;
  if (g != general_total || d != domain_total) {
    throw InvalidArgumentError("frequency totals do not match their counts");
  }
  if (general_total == 0 || domain_total == 0) {
    throw InvalidArgumentError("frequency table needs both corpora nonempty");
  }
}

void FrequencyTableBuilder::AddGeneral(std::string_view sentence) {
  CountTokens(sentence, table_.general_counts, table_.general_total);
}

void FrequencyTableBuilder::AddDomain(std::string_view sentence) {
  CountTokens(sentence, table_.domain_counts, table_.domain_total);
}

FrequencyTable FrequencyTableBuilder::Build() const {
  if (table_.general_total == 0) {
    throw InvalidArgumentError("general corpus is empty");
  }
  if (table_.domain_total == 0) {
    throw InvalidArgumentError("domain corpus is empty");
  }
  return table_;
}

FrequencyTable BuildFrequencyTable(const std::vector<std::string>& general,
                                   const std::vector<std::string>& domain) {
  FrequencyTableBuilder builder;
  for (const auto& s : general) builder.AddGeneral(s);
  for (const auto& s : domain) builder.AddDomain(s);
  return builder.Build();
}

FrequencyTable BuildFrequencyTableFromFiles(const std::filesystem::path& general,
                                            const std::filesystem::path& domain) {
  FrequencyTableBuilder builder;
  std::string line;
  {
    std::ifstream in(general, std::ios::binary);
    if (!in) throw FormatError("cannot open " + general.string());
    while (std::getline(in, line)) builder.AddGeneral(line);
  }
  {
    std::ifstream in(domain, std::ios::binary);
    if (!in) throw FormatError("cannot open " + domain.string());
    while (std::getline(in, line)) builder.AddDomain(line);
  }
  return builder.Build();
}

WordClass ClassifyWord(const std::string& word, const FrequencyTable& table) {
  using u128 = unsigned __int128;
  const u128 lhs = static_cast<u128>(table.GeneralCount(word)) * table.domain_total;
  const u128 rhs = static_cast<u128>(table.DomainCount(word)) * table.general_total;
  return lhs >= rhs ? WordClass::kGeneral : WordClass::kDomain;
}

double DomainRatio(const std::vector<std::string_view>& tokens,
                   const FrequencyTable& table) {
  if (tokens.empty()) {
    throw InvalidArgumentError("domain ratio of an empty sentence");
  }
  size_t domain = 0;
  for (auto t : tokens) {
    if (ClassifyWord(std::string(t), table) == WordClass::kDomain) ++domain;
  }
  return static_cast<double>(domain) / static_cast<double>(tokens.size());
}

std::string_view ToString(StrategyFallback fallback) {
  return fallback == StrategyFallback::kKeep ? "keep" : "random";
}

StrategyFallback ParseStrategyFallback(std::string_view name) {
  if (name == "keep") return StrategyFallback::kKeep;
  if (name == "random") return StrategyFallback::kRandom;
  throw InvalidArgumentError("unknown strategy fallback '" + std::string(name) +
                             "'");
}

void CodeSwitchConfig::Validate() const {
  if (!InUnitInterval(alpha) || !InUnitInterval(beta) || !InUnitInterval(gamma)) {
    throw InvalidArgumentError("alpha, beta and gamma must lie in [0, 1]");
  }
}

std::string FormatSwitchReport(const SwitchReport& report,
                               const CodeSwitchConfig& config) {
  nlohmann::ordered_json j;
  j["alpha"] = config.alpha;
  j["beta"] = config.beta;
  j["gamma"] = config.gamma;
  j["seed"] = config.rng_seed;
  j["strategy_fallback"] = std::string(ToString(config.strategy_fallback));
  j["sentences_seen"] = report.sentences_seen;
  j["sentences_random_path"] = report.sentences_random_path;
  j["sentences_full_path"] = report.sentences_full_path;
  j["tokens_total"] = report.tokens_total;
  j["tokens_dictionary_covered"] = report.tokens_dictionary_covered;
  j["tokens_replaced"] = report.tokens_replaced;
  return j.dump(2) + "\n";
}

CodeSwitcher::CodeSwitcher(const BilingualDictionary& dict,
                           const FrequencyTable& table,
                           const CodeSwitchConfig& config)
    : dict_(dict), table_(table), config_(config) {
  config_.Validate();
  if (dict_.empty()) {
    throw InvalidArgumentError("code switching needs a nonempty dictionary");
  }
  table_.Validate();
  for (const auto& [src, tgts] : dict_.entries()) {
    targets_.emplace(src, std::vector<std::string>(tgts.begin(), tgts.end()));
  }
}

std::string CodeSwitcher::SwitchSentence(std::string_view sentence,
                                         uint64_t sentence_index,
                                         SwitchReport* report) const {
  SwitchReport local;
  SwitchReport& r = report ? *report : local;
  ++r.sentences_seen;
  const auto spans = TokenSpans(sentence);
  r.tokens_total += spans.size();
  if (spans.empty()) return std::string(sentence);

  std::vector<std::string_view> tokens;
  tokens.reserve(spans.size());
  for (const auto& s : spans) tokens.push_back(sentence.substr(s.begin, s.length));

  const uint64_t seed = config_.rng_seed;
  enum class Path { kRandom, kFull, kKeep } path;
  if (UniformAt(seed, {sentence_index, kSentenceDraw}) < config_.alpha) {
    path = Path::kRandom;
    ++r.sentences_random_path;
  } else if (DomainRatio(tokens, table_) >= config_.gamma) {
    path = Path::kFull;
    ++r.sentences_full_path;
  } else {
    path = config_.strategy_fallback == StrategyFallback::kRandom ? Path::kRandom
                                                                  : Path::kKeep;
  }

  std::string out;
  out.reserve(sentence.size() * 2);
  size_t cursor = 0;
  for (size_t t = 0; t < spans.size(); ++t) {
    out.append(sentence.substr(cursor, spans[t].begin - cursor));
    cursor = spans[t].begin + spans[t].length;
    auto it = targets_.find(std::string(tokens[t]));
    if (it == targets_.end()) {
      out.append(tokens[t]);
      continue;
    }
    ++r.tokens_dictionary_covered;
    bool replace = path == Path::kFull;
    if (path == Path::kRandom) {
      replace = UniformAt(seed, {sentence_index, static_cast<uint64_t>(t),
                                 kReplaceDraw}) < config_.beta;
    }
    if (!replace) {
      out.append(tokens[t]);
      continue;
    }
    const auto& choices = it->second;
    size_t pick = 0;
    if (choices.size() > 1) {
      SplitMix64 rng(DeriveSeed(seed, {sentence_index, static_cast<uint64_t>(t),
                                       kChoiceDraw}));
      pick = static_cast<size_t>(rng.Below(choices.size()));
    }
    out.append(choices[pick]);
    ++r.tokens_replaced;
  }
  out.append(sentence.substr(cursor));
  return out;
}

std::pair<std::vector<std::string>, SwitchReport> SwitchCorpus(
    const std::vector<std::string>& corpus, const BilingualDictionary& dict,
    const FrequencyTable& table, const CodeSwitchConfig& config) {
  CodeSwitcher switcher(dict, table, config);
  std::pair<std::vector<std::string>, SwitchReport> out;
  out.first.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    out.first.push_back(switcher.SwitchSentence(corpus[i], i, &out.second));
  }
  return out;
}

SwitchReport SwitchStream(std::istream& in, std::ostream& out,
                          const BilingualDictionary& dict,
                          const FrequencyTable& table,
                          const CodeSwitchConfig& config) {
  CodeSwitcher switcher(dict, table, config);
  SwitchReport report;
  std::string line;
  uint64_t index = 0;
  while (std::getline(in, line)) {
    out << switcher.SwitchSentence(line, index++, &report) << '\n';
  }
  return report;
}

}  // namespace domlex
