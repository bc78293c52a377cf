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

// Command-line front end. Settings come from an optional config file
// (`key = value` lines) and are overridden by flags.
//
// Exit codes: 0 success, 1 validation error, 2 backend failure,
// 3 empty result.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "contribscope/pipeline.hpp"

namespace cs = contribscope;

namespace {

struct Flags {
  std::string papers;
  std::string contexts;
  std::string cue_lexicon;
  std::string role_lexicon;
  std::string mapping;
  std::string backend = "lexicon";
  std::string endpoint_url;
  std::string prompt_template = "{{text}}";
  int timeout_ms = 10000;
  int retries = 3;
  int backoff_ms = 200;
  std::string cache_dir;
  double threshold = cs::kDefaultCotypeThreshold;
  int types = 4;
  int correlation_types = 5;
  std::string norm = "cosine";
  std::string out = "out";
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

std::optional<std::filesystem::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

cs::PipelineConfig to_config(const Flags& f) {
  cs::PipelineConfig c;
  c.papers = f.papers;
  c.contexts = f.contexts;
  c.cue_lexicon = optional_path(f.cue_lexicon);
  c.role_lexicon = optional_path(f.role_lexicon);
  c.mapping = optional_path(f.mapping);
  c.backend = f.backend;
  c.endpoint.url = f.endpoint_url;
  c.endpoint.prompt_template = f.prompt_template;
  c.endpoint.timeout = std::chrono::milliseconds(f.timeout_ms);
  c.endpoint.max_retries = f.retries;
  c.endpoint.initial_backoff = std::chrono::milliseconds(f.backoff_ms);
  c.cache_dir = optional_path(f.cache_dir);
  c.analysis.threshold = f.threshold;
  c.analysis.types = f.types;
  c.analysis.correlation_types = f.correlation_types;
  auto norm = cs::parse_norm_divisor(f.norm);
  if (!norm) throw cs::ValidationError("norm must be `cosine` or `min`, got `" + f.norm + "`");
  c.analysis.norm = *norm;
  c.out = f.out;
  c.jobs = f.jobs;
  c.seed = f.seed;
  return c;
}

int fail(int code, std::string_view kind, std::string_view message) {
  nlohmann::ordered_json e;
  e["error"] = kind;
  e["exit_code"] = code;
  e["message"] = message;
  std::cerr << e.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contribscope: input effort and actual contribution analytics"};
  app.set_version_flag("--version", std::string(cs::tool_version()));
  app.set_config("--config", "", "Configuration file of `key = value` lines");
  app.require_subcommand(1, 1);

  Flags f;
  app.add_option("--papers", f.papers, "Paper records (JSON lines)");
  app.add_option("--contexts", f.contexts, "Citation contexts (JSON lines)");
  app.add_option("--cue-lexicon,--cue_lexicon", f.cue_lexicon, "Cue lexicon CSV");
  app.add_option("--role-lexicon,--role_lexicon", f.role_lexicon, "Role lexicon CSV");
  app.add_option("--mapping", f.mapping, "Role-to-type mapping JSON");
  app.add_option("--backend", f.backend, "Classifier backend: lexicon|external");
  app.add_option("--endpoint-url,--endpoint_url", f.endpoint_url, "Inference endpoint URL");
  app.add_option("--endpoint-prompt-template,--endpoint_prompt_template",
                 f.prompt_template, "Request template; {{text}} is the context");
  app.add_option("--endpoint-timeout-ms,--endpoint_timeout_ms", f.timeout_ms,
                 "Per-request timeout");
  app.add_option("--endpoint-retries,--endpoint_retries", f.retries, "Retries per request");
  app.add_option("--endpoint-backoff-ms,--endpoint_backoff_ms", f.backoff_ms,
                 "Initial retry backoff");
  app.add_option("--cache-dir,--cache_dir", f.cache_dir, "Classification cache directory");
  app.add_option("--threshold", f.threshold, "Co-type threshold on proportions");
  app.add_option("--types", f.types, "Analysed types for co-occurrence: 4|5");
  app.add_option("--correlation-types,--correlation_types", f.correlation_types,
                 "Types used by the correlations: 4|5");
  app.add_option("--norm", f.norm, "Diagonal normalization: cosine|min");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--jobs", f.jobs, "Worker threads");
  app.add_option("--seed", f.seed, "Seed for sampling utilities");

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    return sub;
  };
  CLI::App* ingest = add("ingest", "Validate the inputs and write the corpus snapshot");
  CLI::App* classify = add("classify", "Label citation contexts");
  CLI::App* parse = add("parse-credit", "Parse author contribution statements");
  CLI::App* score = add("score", "Compute per-paper input and output distributions");
  CLI::App* analyze = add("analyze", "Write the analysis report");
  CLI::App* report = add("report", "Write the analysis report and the CSV exports");
  CLI::App* validate = add("validate-config", "Check the configuration and print it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cs::kExitOk : cs::kExitValidation;
  }

  try {
    const cs::PipelineConfig config = to_config(f);
    cs::StageResult result;
    if (*validate) {
      config.validate(true);
      result.summary = config.snapshot();
    } else if (*ingest) {
      result = cs::run_ingest(config);
    } else if (*classify) {
      result = cs::run_classify(config);
    } else if (*parse) {
      result = cs::run_parse_credit(config);
    } else if (*score) {
      result = cs::run_score(config);
    } else if (*analyze) {
      result = cs::run_analyze(config, false);
    } else if (*report) {
      result = cs::run_analyze(config, true);
    }
    std::cout << result.summary.dump(2, ' ', false, nlohmann::json::error_handler_t::replace)
              << '\n';
    if (result.exit_code == cs::kExitBackend) {
      const auto& err = result.summary["backend_error"];
      return fail(cs::kExitBackend, "backend",
                  err.is_string() ? err.get<std::string>() : "backend unavailable");
    }
    return result.exit_code;
  } catch (const cs::EmptyResultError& e) {
    return fail(cs::kExitEmpty, "empty", e.what());
  } catch (const cs::BackendUnavailableError& e) {
    return fail(cs::kExitBackend, "backend", e.what());
  } catch (const cs::ValidationError& e) {
    return fail(cs::kExitValidation, "validation", e.what());
  } catch (const cs::IoError& e) {
    return fail(cs::kExitValidation, "io", e.what());
  } catch (const std::exception& e) {
    return fail(cs::kExitValidation, "error", e.what());
  }
}
