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

#include <doctest.h>

#include <algorithm>

#include <nlohmann/json.hpp>

#include "contribscope/pipeline.hpp"
#include "support/generators.hpp"

namespace cs = contribscope;
namespace fs = std::filesystem;

namespace {

cs::PipelineConfig golden_config(const fs::path& out, std::size_t jobs = 1) {
  cs::PipelineConfig c;
  c.papers = cs::testing::fixture("golden/papers.jsonl");
  c.contexts = cs::testing::fixture("golden/contexts.jsonl");
  c.out = out;
  c.jobs = jobs;
  return c;
}

void run_all(const cs::PipelineConfig& c) {
  REQUIRE(cs::run_ingest(c).exit_code == cs::kExitOk);
  REQUIRE(cs::run_classify(c).exit_code == cs::kExitOk);
  REQUIRE(cs::run_parse_credit(c).exit_code == cs::kExitOk);
  REQUIRE(cs::run_score(c).exit_code == cs::kExitOk);
  REQUIRE(cs::run_analyze(c, true).exit_code == cs::kExitOk);
}

}  // namespace

TEST_CASE("golden corpus end to end matches the frozen report") {
  const fs::path out = cs::testing::temp_dir("e2e");
  const cs::PipelineConfig c = golden_config(out);
  run_all(c);
  const cs::OutputLayout layout{out};
  for (const fs::path& p :
       {layout.corpus_papers(), layout.corpus_contexts(), layout.rejections(),
        layout.labeled_contexts(), layout.classify_stats(), layout.assignments(),
        layout.parse_stats(), layout.scores(), layout.report(), layout.manifest("ingest"),
        layout.manifest("classify"), layout.manifest("parse-credit"), layout.manifest("score"),
        layout.manifest("report")}) {
    CAPTURE(p);
    CHECK(fs::exists(p));
  }
  CHECK(fs::exists(out / "plots" / "fig5_cooccurrence.csv"));
  CHECK(cs::testing::read_text(layout.report()) ==
        cs::testing::read_text(cs::testing::fixture("golden/golden_report.json")));

  const auto manifest = nlohmann::json::parse(cs::testing::read_text(layout.manifest("ingest")));
  CHECK(manifest["stage"] == "ingest");
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["tool_version"] == std::string(cs::tool_version()));
  CHECK(manifest["inputs"].size() == 2);
  CHECK_FALSE(manifest["config"].contains("token"));
  fs::remove_all(out);
}

TEST_CASE("stages read their inputs from disk and can be rerun") {
  const fs::path out = cs::testing::temp_dir("rerun");
  const cs::PipelineConfig c = golden_config(out);
  run_all(c);
  const std::string first = cs::testing::read_text(cs::OutputLayout{out}.report());
  // Rerunning score and analyze alone reproduces the report.
  fs::remove(cs::OutputLayout{out}.report());
  REQUIRE(cs::run_score(c).exit_code == cs::kExitOk);
  REQUIRE(cs::run_analyze(c, false).exit_code == cs::kExitOk);
  CHECK(cs::testing::read_text(cs::OutputLayout{out}.report()) == first);

  // A warm cache serves every non-gold context.
  const cs::StageResult again = cs::run_classify(c);
  CHECK(again.summary["backend_calls"] == 0);
  fs::remove_all(out);
}

TEST_CASE("downstream stage without its inputs fails with IoError") {
  const fs::path out = cs::testing::temp_dir("missing");
  const cs::PipelineConfig c = golden_config(out);
  CHECK_THROWS_AS(cs::run_score(c), cs::IoError);
  CHECK_THROWS_AS(cs::run_analyze(c, false), cs::IoError);
  fs::remove_all(out);
}

TEST_CASE("assignments and scores readers") {
  const fs::path out = cs::testing::temp_dir("readers");
  const cs::PipelineConfig c = golden_config(out);
  run_all(c);
  const auto assignments = cs::read_assignments(cs::OutputLayout{out}.assignments());
  CHECK(assignments.size() == 13);  // one paper has no statement
  for (const auto& a : assignments) CHECK(a.authors.size() == a.roles.size());
  const auto scores = cs::read_scores(cs::OutputLayout{out}.scores());
  CHECK(scores.size() == 14);
  const auto it = std::find_if(scores.begin(), scores.end(),
                               [](const auto& s) { return s.paper_id == "10.1000/golden.12"; });
  REQUIRE(it != scores.end());
  CHECK(std::find(it->flags.begin(), it->flags.end(), "no_statement") != it->flags.end());
  fs::remove_all(out);
}

TEST_CASE("configuration validation") {
  cs::PipelineConfig c = golden_config("unused");
  CHECK_NOTHROW(c.validate());
  c.backend = "oracle";
  CHECK_THROWS_AS(c.validate(), cs::ValidationError);
  c.backend = "external";
  CHECK_THROWS_AS(c.validate(), cs::ValidationError);
  c.endpoint.url = "http://127.0.0.1:9/classify";
  CHECK_NOTHROW(c.validate());
  c = golden_config("unused");
  c.papers = "/nonexistent.jsonl";
  CHECK_THROWS_AS(c.validate(), cs::ValidationError);
  CHECK_NOTHROW(c.validate(false));
  c = golden_config("unused");
  c.jobs = 0;
  CHECK_THROWS_AS(c.validate(), cs::ValidationError);
  c = golden_config("unused");
  c.endpoint.token = "secret";
  CHECK(c.snapshot().dump().find("secret") == std::string::npos);
  CHECK(c.effective_cache_dir() == fs::path("unused") / "cache");
}
