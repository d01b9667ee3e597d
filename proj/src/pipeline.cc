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

#include "domlex/pipeline.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "domlex/text_util.h"
#include "json.hpp"

namespace domlex {
namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

#ifndef DOMLEX_VERSION
#define DOMLEX_VERSION "0.0.0"
#endif

// Reads typed values out of the INI tree and remembers which keys were
// consumed so that typos surface as errors instead of silent defaults.
class ConfigReader {
 public:
  ConfigReader(pt::ptree tree, fs::path base, std::string source)
      : tree_(std::move(tree)), base_(std::move(base)), source_(std::move(source)) {}

  std::optional<std::string> Raw(const std::string& section,
                                 const std::string& key) {
    used_.insert(section + "." + key);
    auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    auto value = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!value) return std::nullopt;
    return *value;
  }

  std::string Where(const std::string& section, const std::string& key) const {
    return source_ + ": [" + section + "] " + key;
  }

  double Double(const std::string& s, const std::string& k, double def) {
    auto v = Raw(s, k);
    return v ? ParseDouble(*v, Where(s, k)) : def;
  }

  size_t Size(const std::string& s, const std::string& k, size_t def) {
    auto v = Raw(s, k);
    if (!v) return def;
    const int64_t n = ParseInt(*v, Where(s, k));
    if (n < 0) throw FormatError(Where(s, k) + ": must be >= 0");
    return static_cast<size_t>(n);
  }

  uint64_t U64(const std::string& s, const std::string& k, uint64_t def) {
    auto v = Raw(s, k);
    if (!v) return def;
    const int64_t n = ParseInt(*v, Where(s, k));
    if (n < 0) throw FormatError(Where(s, k) + ": must be >= 0");
    return static_cast<uint64_t>(n);
  }

  bool Bool(const std::string& s, const std::string& k, bool def) {
    auto v = Raw(s, k);
    if (!v) return def;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw FormatError(Where(s, k) + ": expected true or false, got '" + *v + "'");
  }

  std::optional<fs::path> Path(const std::string& s, const std::string& k) {
    auto v = Raw(s, k);
    if (!v || v->empty()) return std::nullopt;
    fs::path p(*v);
    if (p.is_relative()) p = base_ / p;
    return fs::absolute(p).lexically_normal();
  }

  template <typename Fn>
  auto Enum(const std::string& s, const std::string& k, Fn parse,
            decltype(parse(std::string_view())) def) {
    auto v = Raw(s, k);
    if (!v) return def;
    try {
      return parse(*v);
    } catch (const InvalidArgumentError& e) {
      throw FormatError(Where(s, k) + ": " + e.what());
    }
  }

  void RejectUnknownKeys() const {
    for (const auto& [section, body] : tree_) {
      if (body.empty() && !body.data().empty()) {
        throw FormatError(source_ + ": key '" + section + "' outside a section");
      }
      for (const auto& [key, value] : body) {
        if (!used_.count(section + "." + key)) {
          throw FormatError(source_ + ": unknown key [" + section + "] " + key);
        }
      }
    }
  }

 private:
  pt::ptree tree_;
  fs::path base_;
  std::string source_;
  std::set<std::string> used_;
};

std::vector<double> ParseGrid(const std::string& text, const std::string& where) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::vector<double> grid;
  for (auto tok : SplitWhitespace(spaced)) grid.push_back(ParseDouble(tok, where));
  if (grid.empty()) throw FormatError(where + ": empty grid");
  return grid;
}

void RequireFile(const fs::path& path, const std::string& what) {
  if (!fs::is_regular_file(path)) {
    throw InvalidArgumentError(what + " not found: " + path.string());
  }
}

void RequireOptionalFile(const std::optional<fs::path>& path,
                         const std::string& what) {
  if (path) RequireFile(*path, what);
}

std::vector<std::string> ReadWordList(const fs::path& path) {
  std::vector<std::string> words;
  for (const auto& line : ReadLines(path)) {
    auto fields = SplitWhitespace(line);
    if (!fields.empty()) words.emplace_back(fields[0]);
  }
  return words;
}

size_t ClampK(size_t k, std::initializer_list<size_t> sizes) {
  for (size_t n : sizes) k = std::min(k, n);
  return std::max<size_t>(k, 1);
}

// Runs the stages of one pipeline invocation, timing each and turning any
// failure into a StageError after writing a partial manifest.
class StageRunner {
 public:
  StageRunner(RunManifest& manifest, fs::path out_dir)
      : manifest_(manifest), out_dir_(std::move(out_dir)) {}

  void Run(const std::string& stage, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      manifest_.failed_stage = stage;
      manifest_.error = e.what();
      WriteManifest();
      throw StageError(stage, e.what());
    }
    const std::chrono::duration<double> spent =
        std::chrono::steady_clock::now() - start;
    manifest_.timings.push_back({stage, spent.count()});
  }

  // Writes via `write` then records the file's hash.
  void Output(const std::string& name,
              const std::function<void(const fs::path&)>& write) {
    const fs::path path = out_dir_ / name;
    write(path);
    manifest_.output_hashes[name] = Sha256OfFile(path);
  }

  void WriteManifest() const {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    WriteFile(out_dir_ / "manifest.json", FormatManifest(manifest_));
  }

 private:
  RunManifest& manifest_;
  fs::path out_dir_;
};

std::string PointName(double a, double b, double g) {
  return "a" + FormatDouble(a) + "_b" + FormatDouble(b) + "_g" + FormatDouble(g);
}

}  // namespace

std::string_view ToolkitVersion() { return DOMLEX_VERSION; }

std::string_view ToString(SpringOptimizer optimizer) {
  return optimizer == SpringOptimizer::kAdam ? "adam" : "sgd";
}

SpringOptimizer ParseSpringOptimizer(std::string_view name) {
  if (name == "adam") return SpringOptimizer::kAdam;
  if (name == "sgd") return SpringOptimizer::kSgd;
  throw InvalidArgumentError("unknown optimizer '" + std::string(name) + "'");
}

void PipelineConfig::SetSeed(uint64_t seed) {
  rng_seed = seed;
  align.rng_seed = seed;
  spring.rng_seed = seed;
  codeswitch.rng_seed = seed;
}

void PipelineConfig::Validate() const {
  if (output_dir.empty()) throw InvalidArgumentError("output_dir is required");
  RequireFile(source_vectors, "source vectors");
  RequireFile(target_vectors, "target vectors");
  RequireFile(gold_dictionary, "gold dictionary");
  if (source_dump.has_value() != target_dump.has_value()) {
    throw InvalidArgumentError(
        "occurrence dumps must be given for both languages or neither");
  }
  RequireOptionalFile(source_dump, "source occurrence dump");
  RequireOptionalFile(target_dump, "target occurrence dump");
  RequireOptionalFile(validation_words, "validation word list");
  RequireOptionalFile(codeswitch_dictionary, "code-switch dictionary");
  RequireOptionalFile(general_corpus, "general corpus");
  RequireOptionalFile(domain_corpus, "domain corpus");
  RequireOptionalFile(codeswitch_input, "code-switch input corpus");
  if (max_contexts == 0) throw InvalidArgumentError("max_contexts must be positive");
  align.Validate();
  spring.Validate();
  interp.Validate();
  codeswitch.Validate();
}

const char kPipelineConfigHelp[] = R"(Configuration keys (INI sections) and defaults:

[paths]
  source_vectors, target_vectors   static embeddings, text vector format (required)
  gold_dictionary                  test dictionary "src<TAB>tgt" (required)
  output_dir                       where every output is written (required)
  source_dump, target_dump         occurrence dumps; both or neither
  validation_words                 one word per line; enables lambda tuning
  codeswitch_dictionary, general_corpus, domain_corpus, codeswitch_input
[run]
  seed = 0                         copied into every stage
[align]
  metric = csls                    cosine | csls
  csls_k = 10
  max_iterations = 100
  tolerance = 1e-6
  keep_probability = 0.9
  init_max_words = 4000
  induction_max_words = 20000      0 means the whole vocabulary
  whiten = false
  reweight_exponent = 0
  normalization = unit-center-unit unit | center | unit-center-unit
[anchor]
  max_contexts = 10
[spring]
  negatives = 10
  pairs = 4000
  epochs = 50
  learning_rate = 0.001
  batch_size = 128
  hidden = 0                       0 means twice the embedding dimension
  shared = false
  optimizer = adam                 adam | sgd
  resample_negatives = true
  induction_metric = csls
[interp]
  lambda = 0.5                     used when lambda is not tuned
  lambda_grid = 0,0.1,...,1
  metric = cosine
  csls_k = 10
  missing_anchor = fallback        fallback | skip
  top_n = 1
[codeswitch]
  alpha = 0.5
  beta = 0.5
  gamma = 1
  fallback = keep                  keep | random
)";

PipelineConfig ParsePipelineConfig(std::istream& in, const fs::path& base_dir,
                                   std::string_view source_name) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw FormatError(std::string(source_name) + ": " + e.message() +
                      " at line " + std::to_string(e.line()));
  }
  ConfigReader r(std::move(tree), base_dir, std::string(source_name));
  PipelineConfig c;

  auto required = [&](const std::string& key) {
    auto p = r.Path("paths", key);
    if (!p) throw FormatError(r.Where("paths", key) + ": required");
    return *p;
  };
  c.source_vectors = required("source_vectors");
  c.target_vectors = required("target_vectors");
  c.gold_dictionary = required("gold_dictionary");
  c.output_dir = required("output_dir");
  c.source_dump = r.Path("paths", "source_dump");
  c.target_dump = r.Path("paths", "target_dump");
  c.validation_words = r.Path("paths", "validation_words");
  c.codeswitch_dictionary = r.Path("paths", "codeswitch_dictionary");
  c.general_corpus = r.Path("paths", "general_corpus");
  c.domain_corpus = r.Path("paths", "domain_corpus");
  c.codeswitch_input = r.Path("paths", "codeswitch_input");

  c.SetSeed(r.U64("run", "seed", 0));

  auto& a = c.align;
  a.metric = r.Enum("align", "metric", ParseMetric, a.metric);
  a.csls_k = r.Size("align", "csls_k", a.csls_k);
  a.max_iterations = r.Size("align", "max_iterations", a.max_iterations);
  a.convergence_tolerance =
      r.Double("align", "tolerance", a.convergence_tolerance);
  a.stochastic_keep_probability =
      r.Double("align", "keep_probability", a.stochastic_keep_probability);
  a.init_max_words = r.Size("align", "init_max_words", a.init_max_words);
  a.induction_max_words =
      r.Size("align", "induction_max_words", a.induction_max_words);
  a.whiten = r.Bool("align", "whiten", a.whiten);
  a.reweight_exponent =
      r.Double("align", "reweight_exponent", a.reweight_exponent);
  a.normalization =
      r.Enum("align", "normalization", ParseNormScheme, a.normalization);

  c.max_contexts = r.Size("anchor", "max_contexts", c.max_contexts);

  auto& s = c.spring;
  s.negatives_per_pair = r.Size("spring", "negatives", s.negatives_per_pair);
  s.pair_count = r.Size("spring", "pairs", s.pair_count);
  s.epochs = r.Size("spring", "epochs", s.epochs);
  s.learning_rate = r.Double("spring", "learning_rate", s.learning_rate);
  s.batch_size = r.Size("spring", "batch_size", s.batch_size);
  s.hidden = r.Size("spring", "hidden", s.hidden);
  s.shared = r.Bool("spring", "shared", s.shared);
  s.optimizer = r.Enum("spring", "optimizer", ParseSpringOptimizer, s.optimizer);
  s.resample_negatives =
      r.Bool("spring", "resample_negatives", s.resample_negatives);
  c.spring_induction_metric = r.Enum("spring", "induction_metric", ParseMetric,
                                     c.spring_induction_metric);

  auto& i = c.interp;
  i.lambda = r.Double("interp", "lambda", i.lambda);
  if (auto g = r.Raw("interp", "lambda_grid")) {
    i.lambda_grid = ParseGrid(*g, r.Where("interp", "lambda_grid"));
  }
  i.metric = r.Enum("interp", "metric", ParseMetric, i.metric);
  i.csls_k = r.Size("interp", "csls_k", i.csls_k);
  i.missing_anchor_policy = r.Enum("interp", "missing_anchor",
                                   ParseMissingAnchorPolicy,
                                   i.missing_anchor_policy);
  i.top_n = r.Size("interp", "top_n", i.top_n);

  auto& w = c.codeswitch;
  w.alpha = r.Double("codeswitch", "alpha", w.alpha);
  w.beta = r.Double("codeswitch", "beta", w.beta);
  w.gamma = r.Double("codeswitch", "gamma", w.gamma);
  w.strategy_fallback = r.Enum("codeswitch", "fallback", ParseStrategyFallback,
                               w.strategy_fallback);

  r.RejectUnknownKeys();
  return c;
}

PipelineConfig LoadPipelineConfig(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const fs::path base = fs::absolute(path).parent_path();
  return ParsePipelineConfig(in, base, path.string());
}

std::string FormatPipelineConfig(const PipelineConfig& c) {
  std::ostringstream out;
  auto path = [&](const char* key, const std::optional<fs::path>& p) {
    if (p) out << key << " = " << fs::absolute(*p).lexically_normal().string() << "\n";
  };
  auto num = [](double v) { return FormatDouble(v); };
  auto flag = [](bool b) { return b ? "true" : "false"; };

  out << "[paths]\n";
  path("source_vectors", c.source_vectors);
  path("target_vectors", c.target_vectors);
  path("gold_dictionary", c.gold_dictionary);
  path("output_dir", c.output_dir);
  path("source_dump", c.source_dump);
  path("target_dump", c.target_dump);
  path("validation_words", c.validation_words);
  path("codeswitch_dictionary", c.codeswitch_dictionary);
  path("general_corpus", c.general_corpus);
  path("domain_corpus", c.domain_corpus);
  path("codeswitch_input", c.codeswitch_input);

  out << "\n[run]\nseed = " << c.rng_seed << "\n";

  const auto& a = c.align;
  out << "\n[align]\n"
      << "metric = " << ToString(a.metric) << "\n"
      << "csls_k = " << a.csls_k << "\n"
      << "max_iterations = " << a.max_iterations << "\n"
      << "tolerance = " << num(a.convergence_tolerance) << "\n"
      << "keep_probability = " << num(a.stochastic_keep_probability) << "\n"
      << "init_max_words = " << a.init_max_words << "\n"
      << "induction_max_words = " << a.induction_max_words << "\n"
      << "whiten = " << flag(a.whiten) << "\n"
      << "reweight_exponent = " << num(a.reweight_exponent) << "\n"
      << "normalization = " << ToString(a.normalization) << "\n";

  out << "\n[anchor]\nmax_contexts = " << c.max_contexts << "\n";

  const auto& s = c.spring;
  out << "\n[spring]\n"
      << "negatives = " << s.negatives_per_pair << "\n"
      << "pairs = " << s.pair_count << "\n"
      << "epochs = " << s.epochs << "\n"
      << "learning_rate = " << num(s.learning_rate) << "\n"
      << "batch_size = " << s.batch_size << "\n"
      << "hidden = " << s.hidden << "\n"
      << "shared = " << flag(s.shared) << "\n"
      << "optimizer = " << ToString(s.optimizer) << "\n"
      << "resample_negatives = " << flag(s.resample_negatives) << "\n"
      << "induction_metric = " << ToString(c.spring_induction_metric) << "\n";

  const auto& i = c.interp;
  std::string grid;
  for (double g : i.lambda_grid) {
    if (!grid.empty()) grid += ",";
    grid += num(g);
  }
  out << "\n[interp]\n"
      << "lambda = " << num(i.lambda) << "\n"
      << "lambda_grid = " << grid << "\n"
      << "metric = " << ToString(i.metric) << "\n"
      << "csls_k = " << i.csls_k << "\n"
      << "missing_anchor = " << ToString(i.missing_anchor_policy) << "\n"
      << "top_n = " << i.top_n << "\n";

  const auto& w = c.codeswitch;
  out << "\n[codeswitch]\n"
      << "alpha = " << num(w.alpha) << "\n"
      << "beta = " << num(w.beta) << "\n"
      << "gamma = " << num(w.gamma) << "\n"
      << "fallback = " << ToString(w.strategy_fallback) << "\n";
  return out.str();
}

std::string FormatManifest(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["rng_seed"] = m.rng_seed;
  j["config"] = m.config_snapshot;
  j["timings"] = nlohmann::ordered_json::array();
  for (const auto& t : m.timings) {
    j["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  }
  j["outputs"] = nlohmann::ordered_json::object();
  for (const auto& [name, hash] : m.output_hashes) j["outputs"][name] = hash;
  if (!m.failed_stage.empty()) {
    j["failed_stage"] = m.failed_stage;
    j["error"] = m.error;
  }
  return j.dump(2) + "\n";
}

RunManifest ParseManifest(std::string_view text) {
  RunManifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.version = j.at("version").get<std::string>();
    m.rng_seed = j.at("rng_seed").get<uint64_t>();
    m.config_snapshot = j.at("config").get<std::string>();
    for (const auto& t : j.at("timings")) {
      m.timings.push_back(
          {t.at("stage").get<std::string>(), t.at("seconds").get<double>()});
    }
    for (const auto& [name, hash] : j.at("outputs").items()) {
      m.output_hashes[name] = hash.get<std::string>();
    }
    if (j.contains("failed_stage")) {
      m.failed_stage = j.at("failed_stage").get<std::string>();
      m.error = j.value("error", "");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

RunManifest LoadManifest(const fs::path& path) {
  return ParseManifest(ReadFile(path));
}

PipelineResult RunPipeline(const PipelineConfig& config) {
  PipelineResult result;
  RunManifest& manifest = result.manifest;
  manifest.version = std::string(ToolkitVersion());
  manifest.rng_seed = config.rng_seed;
  manifest.config_snapshot = FormatPipelineConfig(config);
  StageRunner runner(manifest, config.output_dir);

  runner.Run("validate", [&] {
    config.Validate();
    fs::create_directories(config.output_dir);
    runner.Output("config.ini", [&](const fs::path& p) {
      WriteFile(p, manifest.config_snapshot);
    });
  });

  EmbeddingSpace src, tgt;
  BilingualDictionary gold;
  runner.Run("load", [&] {
    src = Normalize(LoadEmbeddings(config.source_vectors),
                    config.align.normalization);
    tgt = Normalize(LoadEmbeddings(config.target_vectors, src.dim()),
                    config.align.normalization);
    gold = LoadDictionary(config.gold_dictionary);
  });

  AlignmentModel model;
  runner.Run("align", [&] {
    model = SelfLearn(src, tgt, config.align);
    runner.Output("alignment.model",
                  [&](const fs::path& p) { SaveAlignmentModel(model, p); });
  });

  EmbeddingSpace src_mapped, tgt_mapped;
  runner.Run("map", [&] {
    src_mapped = MapSpace(src, model, Side::kSource);
    tgt_mapped = MapSpace(tgt, model, Side::kTarget);
    runner.Output("source.mapped.vec",
                  [&](const fs::path& p) { SaveEmbeddings(src_mapped, p); });
    runner.Output("target.mapped.vec",
                  [&](const fs::path& p) { SaveEmbeddings(tgt_mapped, p); });
  });

  std::optional<AlignedAnchors> anchors;
  if (config.source_dump) {
    runner.Run("anchors", [&] {
      const auto src_table =
          BuildAnchorTable(LoadOccurrenceDump(*config.source_dump), src.vocab,
                           config.max_contexts, config.rng_seed);
      const auto tgt_table =
          BuildAnchorTable(LoadOccurrenceDump(*config.target_dump), tgt.vocab,
                           config.max_contexts, config.rng_seed);
      anchors = AlignAnchors(src_table, tgt_table, config.align);
      runner.Output("anchor_alignment.model", [&](const fs::path& p) {
        SaveAlignmentModel(anchors->model, p);
      });
      runner.Output("source.anchors.vec", [&](const fs::path& p) {
        SaveEmbeddings(anchors->src_mapped, p);
      });
      runner.Output("target.anchors.vec", [&](const fs::path& p) {
        SaveEmbeddings(anchors->tgt_mapped, p);
      });
    });
  }
  result.used_anchors = anchors.has_value();

  InducedDictionary induced;
  runner.Run("induce", [&] {
    const size_t k = ClampK(config.align.csls_k,
                            {src_mapped.size(), tgt_mapped.size()});
    induced = Induce(src_mapped, tgt_mapped, config.spring_induction_metric, k);
  });

  SpringTrainResult spring;
  runner.Run("spring", [&] {
    spring = TrainSpring(src_mapped, tgt_mapped, induced, config.spring);
    runner.Output("spring.model", [&](const fs::path& p) {
      SaveSpringNetwork(spring.network, p);
    });
    runner.Output("spring_loss.tsv", [&](const fs::path& p) {
      WriteFile(p, FormatLossLog(spring.epoch_losses));
    });
  });

  EmbeddingSpace src_unified, tgt_unified;
  runner.Run("unify", [&] {
    src_unified = Unify(src_mapped, spring.network, Side::kSource);
    tgt_unified = Unify(tgt_mapped, spring.network, Side::kTarget);
    runner.Output("source.unified.vec",
                  [&](const fs::path& p) { SaveEmbeddings(src_unified, p); });
    runner.Output("target.unified.vec",
                  [&](const fs::path& p) { SaveEmbeddings(tgt_unified, p); });
  });

  std::optional<InterpolatedRetriever> retriever;
  runner.Run("retriever", [&] {
    std::vector<size_t> sizes{src_unified.size(), tgt_unified.size()};
    if (anchors) {
      sizes.push_back(anchors->src_mapped.size());
      sizes.push_back(anchors->tgt_mapped.size());
    }
    size_t k = config.interp.csls_k;
    for (size_t n : sizes) k = std::min(k, n);
    retriever.emplace(src_unified, tgt_unified,
                      anchors ? &anchors->src_mapped : nullptr,
                      anchors ? &anchors->tgt_mapped : nullptr,
                      config.interp.metric, std::max<size_t>(k, 1),
                      config.interp.missing_anchor_policy);
  });

  result.lambda = anchors ? config.interp.lambda : 0.0;
  if (anchors && config.validation_words) {
    runner.Run("tune_lambda", [&] {
      const auto words = ReadWordList(*config.validation_words);
      result.lambda_sweep = TuneLambda(words, *retriever, retriever->Reversed(),
                                       config.interp.lambda_grid);
      result.lambda = result.lambda_sweep->best_lambda;
      runner.Output("lambda_sweep.tsv", [&](const fs::path& p) {
        WriteFile(p, FormatLambdaSweep(*result.lambda_sweep));
      });
    });
  }

  std::map<std::string, std::string> predictions;
  runner.Run("translate", [&] {
    std::vector<RetrievalResult> results;
    for (const auto& [source, targets] : gold.entries()) {
      if (!retriever->source_vocab().Contains(source)) continue;
      auto r = retriever->Translate(source, result.lambda, config.interp.top_n);
      if (r.candidates.empty()) continue;
      predictions[source] = r.candidates.front().word;
      results.push_back(std::move(r));
    }
    runner.Output("translations.tsv", [&](const fs::path& p) {
      WriteFile(p, FormatTranslations(results, config.interp.top_n));
    });
  });

  runner.Run("evaluate", [&] {
    result.report = EvaluatePAt1(predictions, gold);
    runner.Output("eval.tsv", [&](const fs::path& p) {
      WriteFile(p, FormatReportTsv(result.report));
    });
    runner.Output("eval_summary.json", [&](const fs::path& p) {
      WriteFile(p, FormatReportSummary(result.report));
    });
  });

  runner.WriteManifest();
  return result;
}

std::vector<SweepPoint> RunCodeSwitchSweep(const PipelineConfig& config,
                                           const SweepGrid& grid) {
  if (!config.codeswitch_dictionary || !config.general_corpus ||
      !config.domain_corpus || !config.codeswitch_input) {
    throw InvalidArgumentError(
        "the sweep needs codeswitch_dictionary, general_corpus, domain_corpus "
        "and codeswitch_input");
  }
  const auto dict = LoadDictionary(*config.codeswitch_dictionary, "codeswitch");
  const auto table =
      BuildFrequencyTableFromFiles(*config.general_corpus, *config.domain_corpus);
  const auto corpus = ReadLines(*config.codeswitch_input);

  std::vector<SweepPoint> points;
  for (double a : grid.alphas) {
    for (double b : grid.betas) {
      for (double g : grid.gammas) {
        PipelineConfig point_config = config;
        point_config.codeswitch.alpha = a;
        point_config.codeswitch.beta = b;
        point_config.codeswitch.gamma = g;

        SweepPoint point{a, b, g,
                         config.output_dir / "sweep" / PointName(a, b, g),
                         {}, {}};
        point.manifest.version = std::string(ToolkitVersion());
        point.manifest.rng_seed = config.rng_seed;
        point.manifest.config_snapshot = FormatPipelineConfig(point_config);
        StageRunner runner(point.manifest, point.directory);
        runner.Run("codeswitch", [&] {
          fs::create_directories(point.directory);
          auto [lines, report] =
              SwitchCorpus(corpus, dict, table, point_config.codeswitch);
          point.report = report;
          std::string text;
          for (const auto& l : lines) {
            text += l;
            text.push_back('\n');
          }
          runner.Output("switched.txt",
                        [&](const fs::path& p) { WriteFile(p, text); });
          runner.Output("report.json", [&](const fs::path& p) {
            WriteFile(p, FormatSwitchReport(report, point_config.codeswitch));
          });
        });
        runner.WriteManifest();
        points.push_back(std::move(point));
      }
    }
  }
  return points;
}

}  // namespace domlex
