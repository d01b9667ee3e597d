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

// End-to-end orchestration: configuration file, staged run with a manifest
// of output hashes, and the code-switch hyperparameter sweep.
//
// Configuration is an INI file with one section per module; see
// kPipelineConfigHelp for every key and its default. Relative paths are
// resolved against the directory of the configuration file.

#ifndef DOMLEX_PIPELINE_H_
#define DOMLEX_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "domlex/code_switch.h"
#include "domlex/context_anchor.h"
#include "domlex/error.h"
#include "domlex/interp_retrieval.h"
#include "domlex/retrieval.h"
#include "domlex/spring_network.h"
#include "domlex/static_align.h"

namespace domlex {

std::string_view ToolkitVersion();

std::string_view ToString(SpringOptimizer optimizer);
SpringOptimizer ParseSpringOptimizer(std::string_view name);

struct PipelineConfig {
  std::filesystem::path source_vectors;
  std::filesystem::path target_vectors;
  std::optional<std::filesystem::path> source_dump;
  std::optional<std::filesystem::path> target_dump;
  std::filesystem::path gold_dictionary;
  // One word per line; enables round-trip tuning of lambda.
  std::optional<std::filesystem::path> validation_words;
  std::filesystem::path output_dir;

  // Code-switch inputs (used by the sweep and the codeswitch subcommand).
  std::optional<std::filesystem::path> codeswitch_dictionary;
  std::optional<std::filesystem::path> general_corpus;
  std::optional<std::filesystem::path> domain_corpus;
  std::optional<std::filesystem::path> codeswitch_input;

  // Copied into every stage's own seed field when the config is loaded.
  uint64_t rng_seed = 0;
  SelfLearnConfig align;
  size_t max_contexts = kDefaultMaxContexts;
  SpringTrainConfig spring;
  RetrievalMetric spring_induction_metric = RetrievalMetric::kCsls;
  InterpolationConfig interp;
  CodeSwitchConfig codeswitch;

  // Field ranges, referenced files exist, both dumps or neither.
  void Validate() const;
  // The config with `seed` propagated to every stage.
  void SetSeed(uint64_t seed);
};

extern const char kPipelineConfigHelp[];

PipelineConfig ParsePipelineConfig(std::istream& in,
                                   const std::filesystem::path& base_dir,
                                   std::string_view source_name = "<config>");
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);
// Canonical INI text with absolute paths; parses back to the same config.
std::string FormatPipelineConfig(const PipelineConfig& config);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunManifest {
  std::string version;
  std::string config_snapshot;  // FormatPipelineConfig output
  uint64_t rng_seed = 0;
  std::vector<StageTiming> timings;
  std::map<std::string, std::string> output_hashes;  // file name -> SHA-256
  std::string failed_stage;  // empty on success
  std::string error;
};

std::string FormatManifest(const RunManifest& manifest);
RunManifest ParseManifest(std::string_view text);
RunManifest LoadManifest(const std::filesystem::path& path);

// A stage failed; a partial manifest has been written to the output
// directory.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error("stage '" + stage + "' failed: " + cause),
        stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineResult {
  RunManifest manifest;
  EvalReport report;
  bool used_anchors = false;
  double lambda = 0.0;
  std::optional<LambdaSweep> lambda_sweep;
};

// load -> align -> map -> anchors (if dumps) -> induce -> spring -> unify ->
// tune lambda (if validation words and anchors) -> translate -> evaluate.
// Every output lands in config.output_dir together with manifest.json.
PipelineResult RunPipeline(const PipelineConfig& config);

struct SweepGrid {
  std::vector<double> alphas{0.4, 0.5, 0.6, 0.8, 0.9, 1.0};
  std::vector<double> betas{0.4, 0.5, 0.6, 0.8, 0.9, 1.0};
  std::vector<double> gammas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

struct SweepPoint {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::filesystem::path directory;
  SwitchReport report;
  RunManifest manifest;
};

// Code-switches config.codeswitch_input at every grid point into
// output_dir/sweep/<point>/ (switched.txt, report.json, manifest.json).
std::vector<SweepPoint> RunCodeSwitchSweep(const PipelineConfig& config,
                                           const SweepGrid& grid = {});

}  // namespace domlex

#endif  // DOMLEX_PIPELINE_H_
