// Copyright 2026 The ContribScope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Pipeline stages over an output directory. Every stage reads the
// artifacts of the previous ones from disk, so any stage can be rerun on
// its own:
//
//   ingest        corpus/papers.jsonl, corpus/contexts.jsonl, rejections.jsonl
//   classify      labeled/contexts.jsonl, classify_stats.json
//   parse-credit  assignments.jsonl, parse_stats.json
//   score         scores.jsonl
//   analyze       report.json (plus the CSV exports for `report`)
//
// Each run also writes manifests/<stage>.json.

#ifndef CONTRIBSCOPE_PIPELINE_HPP_
#define CONTRIBSCOPE_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "contribscope/classifier.hpp"
#include "contribscope/report.hpp"
#include "contribscope/scoring.hpp"

namespace contribscope {

std::string_view tool_version();

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitBackend = 2,
  kExitEmpty = 3,
};

struct PipelineConfig {
  std::filesystem::path papers;
  std::filesystem::path contexts;
  std::optional<std::filesystem::path> cue_lexicon;
  std::optional<std::filesystem::path> role_lexicon;
  std::optional<std::filesystem::path> mapping;
  std::string backend = "lexicon";
  EndpointConfig endpoint;
  /// Defaults to <out>/cache.
  std::optional<std::filesystem::path> cache_dir;
  AnalysisOptions analysis;
  std::filesystem::path out = "out";
  std::size_t jobs = 1;
  std::uint64_t seed = 0;

  /// Checks settings and that every referenced input exists. Input corpus
  /// paths are only required when `need_inputs` is set. Throws
  /// ValidationError.
  void validate(bool need_inputs = true) const;
  /// Settings as recorded in manifests; the API token is never included.
  nlohmann::ordered_json snapshot() const;
  std::filesystem::path effective_cache_dir() const;
};

/// Locations of the artifacts under an output directory.
struct OutputLayout {
  std::filesystem::path root;

  std::filesystem::path corpus_papers() const { return root / "corpus" / "papers.jsonl"; }
  std::filesystem::path corpus_contexts() const { return root / "corpus" / "contexts.jsonl"; }
  std::filesystem::path rejections() const { return root / "rejections.jsonl"; }
  std::filesystem::path labeled_contexts() const { return root / "labeled" / "contexts.jsonl"; }
  std::filesystem::path classify_stats() const { return root / "classify_stats.json"; }
  std::filesystem::path assignments() const { return root / "assignments.jsonl"; }
  std::filesystem::path parse_stats() const { return root / "parse_stats.json"; }
  std::filesystem::path scores() const { return root / "scores.jsonl"; }
  std::filesystem::path report() const { return root / "report.json"; }
  std::filesystem::path manifest(std::string_view stage) const {
    return root / "manifests" / (std::string(stage) + ".json");
  }
};

struct StageResult {
  int exit_code = kExitOk;
  /// Counts and diagnostics of the run; also stored in the manifest.
  nlohmann::ordered_json summary;
};

/// Stage errors: ValidationError and IoError for bad input or missing
/// artifacts, EmptyResultError when nothing is left to analyse. A backend
/// outage during classify is reported through the exit code instead, after
/// the statistics have been written.
StageResult run_ingest(const PipelineConfig& config);
StageResult run_classify(const PipelineConfig& config);
StageResult run_parse_credit(const PipelineConfig& config);
StageResult run_score(const PipelineConfig& config);
StageResult run_analyze(const PipelineConfig& config, bool with_csv_exports);

/// One line of assignments.jsonl.
struct AssignmentRecord {
  std::string paper_id;
  std::vector<std::string> authors;
  std::vector<RoleSet> roles;
};

std::vector<AssignmentRecord> read_assignments(const std::filesystem::path& path);
std::vector<PaperScores> read_scores(const std::filesystem::path& path);

}  // namespace contribscope

#endif  // CONTRIBSCOPE_PIPELINE_HPP_
