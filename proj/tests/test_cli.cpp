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

// Runs the installed binary as a subprocess and checks exit codes and
// artifacts.

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "support/generators.hpp"

namespace cs = contribscope;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run run(const fs::path& scratch, const std::vector<std::string>& args) {
  std::string cmd = quote(CONTRIBSCOPE_CLI);
  for (const std::string& a : args) cmd += " " + quote(a);
  const fs::path out = scratch / "stdout.txt";
  const fs::path err = scratch / "stderr.txt";
  cmd += " >" + quote(out.string()) + " 2>" + quote(err.string());
  const int status = std::system(cmd.c_str());
  Run r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = cs::testing::read_text(out);
  r.err = cs::testing::read_text(err);
  return r;
}

std::vector<std::string> golden_inputs() {
  return {"--papers", cs::testing::fixture("golden/papers.jsonl").string(), "--contexts",
          cs::testing::fixture("golden/contexts.jsonl").string()};
}

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("full run through the binary reproduces the golden report") {
  const fs::path dir = cs::testing::temp_dir("cli_full");
  const std::vector<std::string> base = golden_inputs() + std::vector<std::string>{"--out", (dir / "out").string()};
  for (const char* stage : {"ingest", "classify", "parse-credit", "score", "report"}) {
    CAPTURE(stage);
    const Run r = run(dir, std::vector<std::string>{stage} + base);
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::accept(r.out));
  }
  CHECK(cs::testing::read_text(dir / "out" / "report.json") ==
        cs::testing::read_text(cs::testing::fixture("golden/golden_report.json")));
  CHECK(fs::exists(dir / "out" / "plots" / "fig2_totals.csv"));
  fs::remove_all(dir);
}

TEST_CASE("version and usage errors") {
  const fs::path dir = cs::testing::temp_dir("cli_usage");
  const Run v = run(dir, {"--version"});
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("0.1.0") != std::string::npos);
  CHECK(run(dir, {}).exit_code == 1);
  CHECK(run(dir, {"frobnicate"}).exit_code == 1);
  CHECK(run(dir, {"ingest", "--jobs", "many"}).exit_code == 1);
  fs::remove_all(dir);
}

TEST_CASE("validation failures exit 1 with a JSON error") {
  const fs::path dir = cs::testing::temp_dir("cli_invalid");
  const Run r = run(dir, {"ingest", "--papers", "/nonexistent/p.jsonl", "--contexts",
                          "/nonexistent/c.jsonl", "--out", (dir / "out").string()});
  CHECK(r.exit_code == 1);
  const auto e = nlohmann::json::parse(r.err);
  CHECK(e["exit_code"] == 1);
  CHECK(e["message"].get<std::string>().find("/nonexistent/p.jsonl") != std::string::npos);

  CHECK(run(dir, golden_inputs() + std::vector<std::string>{"validate-config", "--norm", "max"})
            .exit_code == 1);
  CHECK(run(dir, golden_inputs() + std::vector<std::string>{"validate-config", "--types", "3"})
            .exit_code == 1);
  fs::remove_all(dir);
}

TEST_CASE("one orphan context gives one rejection entry") {
  const fs::path dir = cs::testing::temp_dir("cli_orphan");
  cs::testing::write_text(
      dir / "papers.jsonl",
      R"({"paper_id":"p1","journal":"J","year":2020,"disciplines":[],"authors":["Ana Lopez"]})"
      "\n");
  cs::testing::write_text(
      dir / "contexts.jsonl",
      R"({"context_id":"c1","cited_paper_id":"p1","text":"see [target cited reference]"})"
      "\n"
      R"({"context_id":"c2","cited_paper_id":"nope","text":"see [target cited reference]"})"
      "\n");
  const Run r = run(dir, {"ingest", "--papers", (dir / "papers.jsonl").string(), "--contexts",
                          (dir / "contexts.jsonl").string(), "--out", (dir / "out").string()});
  CHECK(r.exit_code == 0);
  const std::string rejections = cs::testing::read_text(dir / "out" / "rejections.jsonl");
  CHECK(std::count(rejections.begin(), rejections.end(), '\n') == 1);
  CHECK(nlohmann::json::parse(rejections)["reason"] == "orphan");
  fs::remove_all(dir);
}

TEST_CASE("config file with flag override") {
  const fs::path dir = cs::testing::temp_dir("cli_config");
  cs::testing::write_text(
      dir / "run.toml",
      "papers = \"" + cs::testing::fixture("golden/papers.jsonl").string() + "\"\n" +
          "contexts = \"" + cs::testing::fixture("golden/contexts.jsonl").string() + "\"\n" +
          "threshold = 0.2\n"
          "types = 5\n"
          "cue_lexicon = \"" + (fs::path(CONTRIBSCOPE_DATA) / "cue_lexicon.csv").string() + "\"\n"
          "endpoint_retries = 5\n");
  const Run plain = run(dir, {"validate-config", "--config", (dir / "run.toml").string()});
  REQUIRE(plain.exit_code == 0);
  const auto a = nlohmann::json::parse(plain.out);
  CHECK(a["threshold"] == 0.2);
  CHECK(a["types"] == 5);
  CHECK(a["endpoint"]["retries"] == 5);

  const Run over =
      run(dir, {"validate-config", "--config", (dir / "run.toml").string(), "--threshold", "0.1"});
  REQUIRE(over.exit_code == 0);
  CHECK(nlohmann::json::parse(over.out)["threshold"] == 0.1);
  fs::remove_all(dir);
}

TEST_CASE("unreachable external backend exits 2") {
  const fs::path dir = cs::testing::temp_dir("cli_backend");
  const std::string out = (dir / "out").string();
  REQUIRE(run(dir, std::vector<std::string>{"ingest"} + golden_inputs() +
                       std::vector<std::string>{"--out", out})
              .exit_code == 0);
  const Run r = run(dir, std::vector<std::string>{"classify", "--backend", "external",
                                                  "--endpoint-url", "http://127.0.0.1:9/x",
                                                  "--endpoint-retries", "0",
                                                  "--endpoint-timeout-ms", "200", "--out", out} +
                             golden_inputs());
  CHECK(r.exit_code == 2);
  CHECK(nlohmann::json::parse(r.err)["error"] == "backend");
  CHECK(fs::exists(dir / "out" / "classify_stats.json"));
  fs::remove_all(dir);
}

TEST_CASE("empty corpus exits 3 at analysis") {
  const fs::path dir = cs::testing::temp_dir("cli_empty");
  cs::testing::write_text(dir / "papers.jsonl", "");
  cs::testing::write_text(dir / "contexts.jsonl", "");
  const std::vector<std::string> args = {"--papers", (dir / "papers.jsonl").string(),
                                         "--contexts", (dir / "contexts.jsonl").string(),
                                         "--out", (dir / "out").string()};
  for (const char* stage : {"ingest", "classify", "parse-credit", "score"}) {
    CAPTURE(stage);
    CHECK(run(dir, std::vector<std::string>{stage} + args).exit_code == 0);
  }
  const Run r = run(dir, std::vector<std::string>{"analyze"} + args);
  CHECK(r.exit_code == 3);
  CHECK(nlohmann::json::parse(r.err)["error"] == "empty");
  fs::remove_all(dir);
}
