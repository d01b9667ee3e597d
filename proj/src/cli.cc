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

#include "domlex/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "domlex/code_switch.h"
#include "domlex/context_anchor.h"
#include "domlex/error.h"
#include "domlex/interp_retrieval.h"
#include "domlex/pipeline.h"
#include "domlex/retrieval.h"
#include "domlex/spring_network.h"
#include "domlex/static_align.h"
#include "domlex/text_util.h"

namespace domlex {
namespace {

namespace fs = std::filesystem;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

// Every subcommand fills one of these from its flags, then runs `action`.
using Action = std::function<int(const Streams&)>;

std::vector<std::string> ReadWords(const fs::path& path) {
  std::vector<std::string> words;
  for (const auto& line : ReadLines(path)) {
    auto fields = SplitWhitespace(line);
    if (!fields.empty()) words.emplace_back(fields[0]);
  }
  return words;
}

size_t ClampK(size_t k, size_t a, size_t b) {
  return std::max<size_t>(1, std::min({k, a, b}));
}

std::vector<double> ParseList(const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::vector<double> values;
  for (auto tok : SplitWhitespace(spaced)) {
    values.push_back(ParseDouble(tok, "list value"));
  }
  if (values.empty()) throw InvalidArgumentError("empty value list");
  return values;
}

std::map<std::string, std::string> Top1(
    const std::vector<RetrievalResult>& results) {
  std::map<std::string, std::string> predictions;
  for (const auto& r : results) {
    if (!r.candidates.empty()) predictions[r.query] = r.candidates.front().word;
  }
  return predictions;
}

const std::map<std::string, RetrievalMetric> kMetrics{
    {"cosine", RetrievalMetric::kCosine}, {"csls", RetrievalMetric::kCsls}};
const std::map<std::string, NormScheme> kNormSchemes{
    {"unit", NormScheme::kUnit},
    {"center", NormScheme::kCenter},
    {"unit-center-unit", NormScheme::kUnitCenterUnit}};
const std::map<std::string, SpringOptimizer> kOptimizers{
    {"adam", SpringOptimizer::kAdam}, {"sgd", SpringOptimizer::kSgd}};
const std::map<std::string, MissingAnchorPolicy> kPolicies{
    {"fallback", MissingAnchorPolicy::kStaticOnlyFallback},
    {"skip", MissingAnchorPolicy::kSkip}};
const std::map<std::string, StrategyFallback> kFallbacks{
    {"keep", StrategyFallback::kKeep}, {"random", StrategyFallback::kRandom}};

void AddAlignFlags(CLI::App* cmd, SelfLearnConfig& c) {
  cmd->add_option("--seed", c.rng_seed, "Random seed")->capture_default_str();
  cmd->add_option("--metric", c.metric, "Induction metric: cosine | csls")
      ->transform(CLI::CheckedTransformer(kMetrics, CLI::ignore_case))
      ->default_str("csls");
  cmd->add_option("--csls-k", c.csls_k, "CSLS neighborhood size")
      ->capture_default_str();
  cmd->add_option("--max-iterations", c.max_iterations,
                  "Self-learning iteration cap")
      ->capture_default_str();
  cmd->add_option("--tolerance", c.convergence_tolerance,
                  "Stop when the objective improves by less")
      ->capture_default_str();
  cmd->add_option("--keep-probability", c.stochastic_keep_probability,
                  "Candidate survival probability during induction")
      ->capture_default_str();
  cmd->add_option("--init-max-words", c.init_max_words,
                  "Rows used by the sorted-similarity initialization")
      ->capture_default_str();
  cmd->add_option("--induction-max-words", c.induction_max_words,
                  "Rows used during induction, 0 for all")
      ->capture_default_str();
  cmd->add_flag("--whiten", c.whiten, "Whiten before the orthogonal map");
  cmd->add_option("--reweight", c.reweight_exponent,
                  "Re-weighting exponent on singular values")
      ->capture_default_str();
  cmd->add_option("--normalization", c.normalization,
                  "unit | center | unit-center-unit")
      ->transform(CLI::CheckedTransformer(kNormSchemes))
      ->default_str("unit-center-unit");
}

void PrintEval(const EvalReport& report, std::ostream& out) {
  out << FormatReportSummary(report);
}

CLI::App* AddAlign(CLI::App& app, Action& action) {
  struct Opts {
    std::string source, target, output, mapped_source, mapped_target, gold;
    SelfLearnConfig config;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("align", "Unsupervised static alignment");
  cmd->add_option("--source", o->source, "Source vectors")->required();
  cmd->add_option("--target", o->target, "Target vectors")->required();
  cmd->add_option("--output", o->output, "Alignment model file")->required();
  cmd->add_option("--mapped-source", o->mapped_source, "Write mapped source vectors");
  cmd->add_option("--mapped-target", o->mapped_target, "Write mapped target vectors");
  cmd->add_option("--gold", o->gold,
                  "Gold dictionary; prints P@1 of nearest-neighbor retrieval");
  AddAlignFlags(cmd, o->config);
  cmd->callback([o, &action] {
    action = [o](const Streams& io) {
      const auto src = LoadEmbeddings(o->source);
      const auto tgt = LoadEmbeddings(o->target, src.dim());
      const auto model = SelfLearn(src, tgt, o->config);
      SaveAlignmentModel(model, o->output);
      const auto src_mapped = MapSpace(src, model, Side::kSource);
      const auto tgt_mapped = MapSpace(tgt, model, Side::kTarget);
      if (!o->mapped_source.empty()) SaveEmbeddings(src_mapped, o->mapped_source);
      if (!o->mapped_target.empty()) SaveEmbeddings(tgt_mapped, o->mapped_target);
      if (!o->gold.empty()) {
        const auto gold = LoadDictionary(o->gold);
        const size_t k =
            ClampK(o->config.csls_k, src_mapped.size(), tgt_mapped.size());
        const auto induced = Induce(src_mapped, tgt_mapped, o->config.metric, k);
        std::map<std::string, std::string> predictions;
        for (const auto& p : induced.pairs) {
          predictions[src_mapped.vocab.Word(p.source)] =
              tgt_mapped.vocab.Word(p.target);
        }
        PrintEval(EvaluatePAt1(predictions, gold), io.out);
      }
      return kExitOk;
    };
  });
  return cmd;
}

CLI::App* AddAnchor(CLI::App& app, Action& action) {
  struct Opts {
    std::string source_dump, target_dump, source_vectors, target_vectors;
    std::string source_output, target_output, model, coverage;
    size_t max_contexts = kDefaultMaxContexts;
    size_t coverage_cap = kDefaultMaxContexts;
    SelfLearnConfig config;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand(
      "anchor", "Average anchors from occurrence dumps, aligned when both "
                "languages are given");
  cmd->add_option("--source-dump", o->source_dump, "Source occurrence dump")
      ->required();
  cmd->add_option("--target-dump", o->target_dump, "Target occurrence dump");
  cmd->add_option("--source-vectors", o->source_vectors,
                  "Restrict and order source anchors by this vocabulary");
  cmd->add_option("--target-vectors", o->target_vectors,
                  "Restrict and order target anchors by this vocabulary");
  cmd->add_option("--source-output", o->source_output, "Source anchor vectors")
      ->required();
  cmd->add_option("--target-output", o->target_output, "Target anchor vectors");
  cmd->add_option("--model", o->model, "Write the anchor alignment model");
  cmd->add_option("--max-contexts", o->max_contexts,
                  "Occurrences averaged per word")
      ->capture_default_str();
  cmd->add_option("--coverage", o->coverage,
                  "Check the source dump against this coverage sidecar");
  cmd->add_option("--coverage-cap", o->coverage_cap,
                  "Record cap per word used by the coverage check")
      ->capture_default_str();
  AddAlignFlags(cmd, o->config);
  cmd->callback([o, &action] {
    action = [o](const Streams& io) {
      const auto src_dump = LoadOccurrenceDump(o->source_dump);
      if (!o->coverage.empty()) {
        const auto problems =
            CheckCoverage(src_dump, LoadCoverage(o->coverage), o->coverage_cap);
        for (const auto& p : problems) io.err << "coverage: " << p << "\n";
        if (!problems.empty()) return kExitData;
      }
      auto vocab_of = [](const OccurrenceDump& dump, const std::string& vectors) {
        return vectors.empty() ? DumpVocabulary(dump)
                               : LoadEmbeddings(vectors).vocab;
      };
      const auto src_table =
          BuildAnchorTable(src_dump, vocab_of(src_dump, o->source_vectors),
                           o->max_contexts, o->config.rng_seed);
      if (o->target_dump.empty()) {
        SaveEmbeddings(src_table.space, o->source_output);
        return kExitOk;
      }
      if (o->target_output.empty()) {
        throw InvalidArgumentError("--target-output is required with --target-dump");
      }
      const auto tgt_dump = LoadOccurrenceDump(o->target_dump);
      const auto tgt_table =
          BuildAnchorTable(tgt_dump, vocab_of(tgt_dump, o->target_vectors),
                           o->max_contexts, o->config.rng_seed);
      const auto aligned = AlignAnchors(src_table, tgt_table, o->config);
      SaveEmbeddings(aligned.src_mapped, o->source_output);
      SaveEmbeddings(aligned.tgt_mapped, o->target_output);
      if (!o->model.empty()) SaveAlignmentModel(aligned.model, o->model);
      return kExitOk;
    };
  });
  return cmd;
}

CLI::App* AddSpring(CLI::App& app, Action& action) {
  struct Opts {
    std::string source, target, output, loss_log, unified_source, unified_target;
    SpringTrainConfig config;
    RetrievalMetric induction_metric = RetrievalMetric::kCsls;
    size_t csls_k = kDefaultCslsK;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("spring", "Train the spring network");
  cmd->add_option("--source", o->source, "Mapped source vectors")->required();
  cmd->add_option("--target", o->target, "Mapped target vectors")->required();
  cmd->add_option("--output", o->output, "Spring network file")->required();
  cmd->add_option("--loss-log", o->loss_log, "Write per-epoch losses");
  cmd->add_option("--unified-source", o->unified_source,
                  "Write unified source vectors");
  cmd->add_option("--unified-target", o->unified_target,
                  "Write unified target vectors");
  auto& c = o->config;
  cmd->add_option("--seed", c.rng_seed, "Random seed")->capture_default_str();
  cmd->add_option("--negatives", c.negatives_per_pair, "Negatives per pair")
      ->capture_default_str();
  cmd->add_option("--pairs", c.pair_count, "Training pairs taken by score")
      ->capture_default_str();
  cmd->add_option("--epochs", c.epochs, "Epochs")->capture_default_str();
  cmd->add_option("--learning-rate", c.learning_rate, "Learning rate")
      ->capture_default_str();
  cmd->add_option("--batch-size", c.batch_size, "Pairs per update")
      ->capture_default_str();
  cmd->add_option("--hidden", c.hidden, "Hidden width, 0 for twice the dimension")
      ->capture_default_str();
  cmd->add_flag("--shared", c.shared, "One network for both languages");
  cmd->add_option("--optimizer", c.optimizer, "adam | sgd")
      ->transform(CLI::CheckedTransformer(kOptimizers, CLI::ignore_case))
      ->default_str("adam");
  cmd->add_option("--induction-metric", o->induction_metric,
                  "Metric inducing the training dictionary")
      ->transform(CLI::CheckedTransformer(kMetrics, CLI::ignore_case))
      ->default_str("csls");
  cmd->add_option("--csls-k", o->csls_k, "CSLS neighborhood size")
      ->capture_default_str();
  cmd->callback([o, &action] {
    action = [o](const Streams&) {
      const auto src = LoadEmbeddings(o->source);
      const auto tgt = LoadEmbeddings(o->target, src.dim());
      const auto induced = Induce(src, tgt, o->induction_metric,
                                  ClampK(o->csls_k, src.size(), tgt.size()));
      const auto result = TrainSpring(src, tgt, induced, o->config);
      SaveSpringNetwork(result.network, o->output);
      if (!o->loss_log.empty()) {
        WriteFile(o->loss_log, FormatLossLog(result.epoch_losses));
      }
      if (!o->unified_source.empty()) {
        SaveEmbeddings(Unify(src, result.network, Side::kSource),
                       o->unified_source);
      }
      if (!o->unified_target.empty()) {
        SaveEmbeddings(Unify(tgt, result.network, Side::kTarget),
                       o->unified_target);
      }
      return kExitOk;
    };
  });
  return cmd;
}

CLI::App* AddTranslate(CLI::App& app, Action& action) {
  struct Opts {
    std::string source, target, source_anchors, target_anchors;
    std::string words, gold, validation, output, sweep_output, grid;
    InterpolationConfig config;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand(
      "translate", "Interpolated retrieval over unified vectors and anchors");
  cmd->add_option("--source", o->source, "Unified source vectors")->required();
  cmd->add_option("--target", o->target, "Unified target vectors")->required();
  cmd->add_option("--source-anchors", o->source_anchors, "Mapped source anchors");
  cmd->add_option("--target-anchors", o->target_anchors, "Mapped target anchors");
  auto* words = cmd->add_option("--words", o->words, "Query words, one per line");
  auto* gold = cmd->add_option("--gold", o->gold,
                               "Translate the sources of this dictionary");
  words->excludes(gold);
  cmd->add_option("--validation", o->validation,
                  "Validation words; tunes lambda by round trip");
  cmd->add_option("--lambda-grid", o->grid, "Comma separated lambda grid");
  cmd->add_option("--sweep-output", o->sweep_output, "Write the lambda sweep");
  cmd->add_option("--output", o->output, "Translations file (default stdout)");
  auto& c = o->config;
  cmd->add_option("--lambda", c.lambda, "Anchor weight when not tuned")
      ->capture_default_str();
  cmd->add_option("--metric", c.metric, "cosine | csls, applied to each term")
      ->transform(CLI::CheckedTransformer(kMetrics, CLI::ignore_case))
      ->default_str("cosine");
  cmd->add_option("--csls-k", c.csls_k, "CSLS neighborhood size")
      ->capture_default_str();
  cmd->add_option("--missing-anchor", c.missing_anchor_policy, "fallback | skip")
      ->transform(CLI::CheckedTransformer(kPolicies, CLI::ignore_case))
      ->default_str("fallback");
  cmd->add_option("--top-n", c.top_n, "Candidates per query")
      ->capture_default_str();
  cmd->callback([o, &action] {
    action = [o](const Streams& io) {
      if (o->words.empty() && o->gold.empty()) {
        throw CLI::ValidationError("translate", "--words or --gold is required");
      }
      if (o->source_anchors.empty() != o->target_anchors.empty()) {
        throw CLI::ValidationError(
            "translate", "--source-anchors and --target-anchors go together");
      }
      if (!o->grid.empty()) o->config.lambda_grid = ParseList(o->grid);
      const auto src = LoadEmbeddings(o->source);
      const auto tgt = LoadEmbeddings(o->target, src.dim());
      std::optional<EmbeddingSpace> as, at;
      size_t k = std::min({o->config.csls_k, src.size(), tgt.size()});
      if (!o->source_anchors.empty()) {
        as = LoadEmbeddings(o->source_anchors);
        at = LoadEmbeddings(o->target_anchors, as->dim());
        k = std::min({k, as->size(), at->size()});
      }
      o->config.csls_k = std::max<size_t>(k, 1);
      o->config.Validate();
      InterpolatedRetriever retriever(src, tgt, as ? &*as : nullptr,
                                      at ? &*at : nullptr, o->config.metric,
                                      o->config.csls_k,
                                      o->config.missing_anchor_policy);
      double lambda = as ? o->config.lambda : 0.0;
      if (as && !o->validation.empty()) {
        const auto sweep = TuneLambda(ReadWords(o->validation), retriever,
                                      retriever.Reversed(),
                                      o->config.lambda_grid);
        lambda = sweep.best_lambda;
        if (!o->sweep_output.empty()) {
          WriteFile(o->sweep_output, FormatLambdaSweep(sweep));
        }
      }
      std::vector<std::string> queries;
      if (!o->words.empty()) {
        queries = ReadWords(o->words);
      } else {
        const auto gold = LoadDictionary(o->gold);
        for (const auto& [s, t] : gold.entries()) queries.push_back(s);
      }
      std::vector<RetrievalResult> results;
      for (const auto& q : queries) {
        if (!retriever.source_vocab().Contains(q)) continue;
        results.push_back(retriever.Translate(q, lambda, o->config.top_n));
      }
      const std::string text = FormatTranslations(results, o->config.top_n);
      if (o->output.empty()) {
        io.out << text;
      } else {
        WriteFile(o->output, text);
      }
      if (!o->gold.empty()) {
        PrintEval(EvaluatePAt1(Top1(results), LoadDictionary(o->gold)), io.err);
      }
      return kExitOk;
    };
  });
  return cmd;
}

CLI::App* AddCodeSwitch(CLI::App& app, Action& action) {
  struct Opts {
    std::string dict, general, domain, input, output, report;
    CodeSwitchConfig config;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand(
      "codeswitch", "Dictionary-based code switching of a corpus");
  cmd->add_option("--dict", o->dict, "Bilingual dictionary")->required();
  cmd->add_option("--general-corpus", o->general, "General-domain corpus")
      ->required();
  cmd->add_option("--domain-corpus", o->domain, "In-domain corpus")->required();
  cmd->add_option("--input", o->input, "Corpus to switch (default stdin)");
  cmd->add_option("--output", o->output, "Switched corpus (default stdout)");
  cmd->add_option("--report", o->report, "Write a JSON switch report");
  auto& c = o->config;
  cmd->add_option("--alpha", c.alpha, "Sentence replace ratio")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--beta", c.beta, "Word replacement ratio")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--gamma", c.gamma, "Domain-ratio threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", c.rng_seed, "Random seed")->capture_default_str();
  cmd->add_option("--fallback", c.strategy_fallback,
                  "Below-threshold sentences on the strategy path: keep | random")
      ->transform(CLI::CheckedTransformer(kFallbacks, CLI::ignore_case))
      ->default_str("keep");
  cmd->callback([o, &action] {
    action = [o](const Streams& io) {
      const auto dict = LoadDictionary(o->dict, "codeswitch");
      const auto table = BuildFrequencyTableFromFiles(o->general, o->domain);
      std::ifstream file_in;
      if (!o->input.empty()) {
        file_in.open(o->input, std::ios::binary);
        if (!file_in) throw FormatError("cannot open " + o->input);
      }
      std::istream& in = o->input.empty() ? io.in : file_in;
      std::ofstream file_out;
      if (!o->output.empty()) {
        file_out.open(o->output, std::ios::binary);
        if (!file_out) throw FormatError("cannot write " + o->output);
      }
      std::ostream& out = o->output.empty() ? io.out : file_out;
      const auto report = SwitchStream(in, out, dict, table, o->config);
      out.flush();
      if (!o->report.empty()) {
        WriteFile(o->report, FormatSwitchReport(report, o->config));
      }
      return kExitOk;
    };
  });
  return cmd;
}

CLI::App* AddEval(CLI::App& app, Action& action) {
  struct Opts {
    std::string predictions, gold, report, summary;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("eval", "Precision at 1 of a translation file");
  cmd->add_option("--predictions", o->predictions,
                  "Translations \"src<TAB>tgt[<TAB>score]\"")
      ->required();
  cmd->add_option("--gold", o->gold, "Gold dictionary")->required();
  cmd->add_option("--report", o->report, "Write the per-word report");
  cmd->add_option("--summary", o->summary, "Write the JSON summary");
  cmd->callback([o, &action] {
    action = [o](const Streams& io) {
      const auto report =
          EvaluatePAt1(LoadPredictions(o->predictions), LoadDictionary(o->gold));
      if (!o->report.empty()) WriteFile(o->report, FormatReportTsv(report));
      if (!o->summary.empty()) WriteFile(o->summary, FormatReportSummary(report));
      PrintEval(report, io.out);
      return kExitOk;
    };
  });
  return cmd;
}

CLI::App* AddRun(CLI::App& app, Action& action) {
  struct Opts {
    std::string config;
    std::optional<uint64_t> seed;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("run", "Run the whole pipeline from a config");
  cmd->footer(kPipelineConfigHelp);
  cmd->add_option("--config", o->config, "INI configuration file")->required();
  cmd->add_option("--seed", o->seed, "Override [run] seed");
  cmd->callback([o, &action] {
    action = [o](const Streams& io) {
      auto config = LoadPipelineConfig(o->config);
      if (o->seed) config.SetSeed(*o->seed);
      const auto result = RunPipeline(config);
      PrintEval(result.report, io.out);
      return kExitOk;
    };
  });
  return cmd;
}

CLI::App* AddSweep(CLI::App& app, Action& action) {
  struct Opts {
    std::string config, alphas, betas, gammas;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand(
      "sweep", "Code-switch every (alpha, beta, gamma) grid point");
  cmd->footer(kPipelineConfigHelp);
  cmd->add_option("--config", o->config, "INI configuration file")->required();
  cmd->add_option("--alphas", o->alphas, "Comma separated alpha grid");
  cmd->add_option("--betas", o->betas, "Comma separated beta grid");
  cmd->add_option("--gammas", o->gammas, "Comma separated gamma grid");
  cmd->callback([o, &action] {
    action = [o](const Streams& io) {
      const auto config = LoadPipelineConfig(o->config);
      SweepGrid grid;
      if (!o->alphas.empty()) grid.alphas = ParseList(o->alphas);
      if (!o->betas.empty()) grid.betas = ParseList(o->betas);
      if (!o->gammas.empty()) grid.gammas = ParseList(o->gammas);
      const auto points = RunCodeSwitchSweep(config, grid);
      io.out << "alpha\tbeta\tgamma\treplaced\tcovered\tdirectory\n";
      for (const auto& p : points) {
        io.out << FormatDouble(p.alpha) << '\t' << FormatDouble(p.beta) << '\t'
               << FormatDouble(p.gamma) << '\t' << p.report.tokens_replaced
               << '\t' << p.report.tokens_dictionary_covered << '\t'
               << p.directory.string() << '\n';
      }
      return kExitOk;
    };
  });
  return cmd;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"domlex: cross-domain bilingual lexicon induction toolkit", "domlex"};
  app.set_version_flag("--version", std::string(ToolkitVersion()));
  app.require_subcommand(1);
  Action action;
  AddAlign(app, action);
  AddAnchor(app, action);
  AddSpring(app, action);
  AddTranslate(app, action);
  AddCodeSwitch(app, action);
  AddEval(app, action);
  AddRun(app, action);
  AddSweep(app, action);

  const Streams io{in, out, err};
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    return action ? action(io) : kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const StageError& e) {
    err << "domlex: " << e.what() << "\n";
    return kExitStage;
  } catch (const FormatError& e) {
    err << "domlex: data error: " << e.what() << "\n";
    return kExitData;
  } catch (const InvalidArgumentError& e) {
    err << "domlex: data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "domlex: failed: " << e.what() << "\n";
    return kExitStage;
  }
}

int RunCli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cin, std::cout, std::cerr);
}

}  // namespace domlex
