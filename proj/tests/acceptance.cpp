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

// Acceptance checks AC1..AC8. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "contribscope/analytics.hpp"
#include "contribscope/credit_parser.hpp"
#include "contribscope/pipeline.hpp"
#include "support/generators.hpp"

namespace cs = contribscope;
namespace fs = std::filesystem;
using T = cs::ContributionType;
using R = cs::CreditRole;

namespace {

// Pinned tolerances and limits.
constexpr double kPercentTol = 0.005;       // percentage points
constexpr double kFormulaTol = 1e-12;
constexpr double kPearsonTol = 1e-12;
constexpr double kPearsonPTol = 1e-3;
constexpr double kAffineTol = 1e-9;
constexpr double kProfileTol = 1e-12;
constexpr double kParserBar = 0.90;
constexpr double kAc1Seconds = 60.0;
constexpr double kAc2Seconds = 10.0;
constexpr double kAc3Seconds = 10.0;
constexpr double kAc4Seconds = 30.0;
constexpr double kAc7Seconds = 60.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// ---------------------------------------------------------------------------

Outcome ac1_table5() {
  Outcome o;
  const auto start = Clock::now();
  const std::array<long long, 5> target{312084, 216933, 867159, 121284, 17007};
  const std::array<double, 5> percent{20.34, 14.14, 56.51, 7.90, 1.11};
  constexpr int kPapers = 7041;

  std::string papers;
  for (int p = 0; p < kPapers; ++p) {
    papers += fmt::format(
        R"({{"paper_id":"10.9/{}","journal":"Nature","year":2020,"disciplines":[],"authors":["Ana Lopez"]}})",
        p);
    papers += '\n';
  }
  std::string contexts;
  contexts.reserve(std::size_t{160} * 1534467);
  long long id = 0;
  for (std::size_t t = 0; t < 5; ++t) {
    const std::string label(cs::to_string(cs::kAllTypes[t]));
    for (long long i = 0; i < target[t]; ++i, ++id) {
      contexts += fmt::format(
          R"({{"context_id":"c{}","cited_paper_id":"10.9/{}","text":"as in [target cited reference]","label":"{}","label_source":"gold"}})",
          id, id % kPapers, label);
      contexts += '\n';
    }
  }
  std::istringstream ps(papers);
  std::istringstream cstream(std::move(contexts));
  const cs::LoadResult loaded = cs::load_corpus(ps, cstream);
  o.require(loaded.rejections.empty(), "rejections while loading");

  std::vector<cs::PaperScores> scores(loaded.corpus.paper_count());
  for (std::size_t p = 0; p < scores.size(); ++p) {
    scores[p].paper_id = loaded.corpus.papers()[p].paper_id;
    scores[p].output = cs::output_distribution(loaded.corpus.contexts_of(p));
  }
  const cs::OutputDistribution d = cs::corpus_output_distribution(scores);
  o.require(d.total == 1534467, fmt::format("total {}", d.total));
  for (std::size_t t = 0; t < 5; ++t) {
    o.require(d.counts(static_cast<Eigen::Index>(t)) == target[t], "count mismatch");
    const double pct = 100.0 * (*d.proportions)(static_cast<Eigen::Index>(t));
    o.require(std::abs(pct - percent[t]) <= kPercentTol,
              fmt::format("{} at {:.4f}%", cs::to_string(cs::kAllTypes[t]), pct));
  }
  const double s = seconds_since(start);
  o.require(s < kAc1Seconds, fmt::format("took {:.1f}s", s));
  if (o.pass) o.detail = fmt::format("total {} in {:.1f}s", d.total, s);
  return o;
}

Outcome ac2_formula_oracle() {
  Outcome o;
  const auto start = Clock::now();
  cs::testing::Gen g(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = g.assignment(20);
    const int n = static_cast<int>(a.size());
    const auto scores = cs::role_credit_scores<double>(a, n);
    std::array<double, cs::kNumRoles> oracle{};
    int credited = 0;
    for (const cs::RoleSet& roles : a) {
      const auto d = roles.count();
      if (d == 0) continue;
      ++credited;
      for (std::size_t l = 0; l < cs::kNumRoles; ++l) {
        if (roles[l]) oracle[l] += 1.0 / static_cast<double>(d);
      }
    }
    for (std::size_t l = 0; l < cs::kNumRoles; ++l) {
      o.require(std::abs(scores.credit(static_cast<Eigen::Index>(l)) - oracle[l]) <= kFormulaTol,
                "C_l differs from oracle");
    }
    o.require(std::abs(scores.credit.sum() - credited) <= kFormulaTol, "sum C_l != n_credited");
    const auto e = cs::input_effort_distribution(scores, cs::EffortMapping::standard());
    o.require(std::abs(e.sum() - static_cast<double>(credited) / n -
                       scores.of(R::Investigation) / n) <= kFormulaTol,
              "double-count identity");
  }
  const double s = seconds_since(start);
  o.require(s < kAc2Seconds, fmt::format("took {:.1f}s", s));
  if (o.pass) o.detail = fmt::format("1000 assignments in {:.2f}s", s);
  return o;
}

Outcome ac3_pearson() {
  Outcome o;
  const auto start = Clock::now();
  const cs::CorrelationResult r =
      cs::pearson(Eigen::Vector4d(1, 2, 3, 4), Eigen::Vector4d(1, 3, 2, 4));
  o.require(r.r && std::abs(*r.r - 0.8) <= kPearsonTol, "r != 0.8");
  o.require(r.p && std::abs(*r.p - 0.2) <= kPearsonPTol, "p != 0.200");
  cs::testing::Gen g(3);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = g.uniform_int(3, 30);
    const Eigen::VectorXd x = g.vector(n);
    const Eigen::VectorXd y = g.vector(n);
    const auto base = cs::pearson(x, y);
    if (!base.defined()) continue;
    const double a = g.uniform(0.1, 10.0);
    const double b = g.uniform(-5.0, 5.0);
    const Eigen::VectorXd xt = (a * x).array() + b;
    const Eigen::VectorXd yt = (a * y).array() - b;
    o.require(std::abs(*cs::pearson(xt, y).r - *base.r) <= kAffineTol, "affine x");
    o.require(std::abs(*cs::pearson(x, yt).r - *base.r) <= kAffineTol, "affine y");
    o.require(std::abs(*cs::pearson(-xt, y).r + *base.r) <= kAffineTol, "sign flip");
  }
  const double s = seconds_since(start);
  o.require(s < kAc3Seconds, fmt::format("took {:.1f}s", s));
  if (o.pass) o.detail = fmt::format("r={:.12f} p={:.6f} in {:.2f}s", *r.r, *r.p, s);
  return o;
}

void check_matrix(Outcome& o, const cs::CooccurrenceMatrix& m) {
  o.require(m.counts == m.counts.transpose(), "asymmetric counts");
  const auto n = m.counts.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) {
        o.require(m.counts(i, j) <= std::min(m.counts(i, i), m.counts(j, j)), "M_ij > min diag");
      }
    }
  }
  const cs::NormalizedMatrix s = cs::normalize_diagonal(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!s.defined(i, j)) continue;
      o.require(s.values(i, j) >= 0.0 && s.values(i, j) <= 1.0, "normalized outside [0,1]");
      if (i == j) o.require(s.values(i, i) == 1.0, "diagonal != 1");
    }
  }
}

Outcome ac4_cooccurrence() {
  Outcome o;
  const auto start = Clock::now();
  cs::CooccurrenceMatrix m({T::Theoretical, T::Methodological});
  m.counts.resize(2, 2);
  m.counts << 4, 2, 2, 1;
  o.require(cs::normalize_diagonal(m).values(0, 1) == 1.0, "[[4,2],[2,1]] != 1.0");
  m.counts << 9, 3, 3, 4;
  o.require(cs::normalize_diagonal(m).values(0, 1) == 0.5, "[[9,3],[3,4]] != 0.5");

  // a1 {T,E}, a2 {T,M,E}, a3 {M}.
  const std::vector<cs::PaperAssignments> example{
      {cs::role_set({R::Conceptualization, R::FormalAnalysis}),
       cs::role_set({R::Conceptualization, R::Methodology, R::FormalAnalysis}),
       cs::role_set({R::Methodology})}};
  const cs::CooccurrenceMatrix e = cs::input_cooccurrence(example, cs::EffortMapping::standard());
  o.require(e.counts(0, 2) == 2 && e.counts(0, 1) == 1 && e.counts(1, 2) == 1,
            "three-author example");

  cs::testing::Gen g(4);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<cs::PaperAssignments> papers;
    std::vector<cs::TypeVector> props;
    const int n = g.uniform_int(1, 15);
    for (int p = 0; p < n; ++p) {
      papers.push_back(g.assignment(10));
      cs::TypeCounts c = g.counts(8);
      if (c.sum() == 0) c(0) = 1;
      props.push_back(c.cast<double>() / static_cast<double>(c.sum()));
    }
    check_matrix(o, cs::input_cooccurrence(papers, cs::EffortMapping::standard()));
    check_matrix(o, cs::output_cooccurrence(props));
  }
  const double s = seconds_since(start);
  o.require(s < kAc4Seconds, fmt::format("took {:.1f}s", s));
  if (o.pass) o.detail = fmt::format("1000 corpora in {:.2f}s", s);
  return o;
}

Outcome ac5_threshold() {
  Outcome o;
  o.require(cs::output_cotypes(cs::TypeVector(0.50, 0.40, 0.05, 0.05, 0)) ==
                cs::type_set({T::Theoretical, T::Methodological}),
            "example 1");
  o.require(cs::output_cotypes(cs::TypeVector(1, 0, 0, 0, 0)) == cs::type_set({T::Theoretical}),
            "example 2");
  o.require(cs::output_cotypes(cs::TypeVector(0.40, 0.24, 0.26, 0.10, 0)) ==
                cs::type_set({T::Theoretical, T::Experimental}),
            "example 3");
  o.require(cs::output_cotypes(cs::TypeVector(0.55, 0.40, 0.05, 0, 0)) ==
                cs::type_set({T::Theoretical}),
            "gap 0.15 included");
  o.require(cs::output_cotypes(cs::TypeVector(0.35, 0.20, 0.20, 0.25, 0)) ==
                cs::type_set({T::Theoretical, T::DataBased}),
            "gap 0.15 included");
  if (o.pass) o.detail = "3 examples + boundary";
  return o;
}

Outcome ac6_parser() {
  Outcome o;
  std::ifstream in(cs::testing::fixture("parser_fixture.jsonl"));
  std::string line;
  std::size_t sentences = 0;
  std::size_t matched = 0;
  std::size_t compared = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    ++sentences;
    cs::PaperRecord paper;
    paper.paper_id = "fixture-" + std::to_string(j["id"].get<int>());
    for (const auto& a : j["authors"]) paper.authors.push_back(cs::AuthorName::from(a.get<std::string>()));
    paper.contribution_statement = j["sentence"].get<std::string>();
    const cs::ParsedStatement parsed =
        cs::parse_statement(paper, cs::RoleLexicon::default_lexicon());
    o.require(parsed.sentences ==
                  parsed.aligned_sentences + parsed.residue_sentences + parsed.ambiguous_sentences,
              "conservation violated");

    // Expected (author, roles) pairs against produced ones, as sets.
    std::map<std::size_t, cs::RoleSet> expected;
    for (const auto& e : j["expected"]) {
      const std::string name = e["author"].get<std::string>();
      std::size_t idx = 0;
      while (paper.authors[idx].full_name != name) ++idx;
      cs::RoleSet roles;
      for (const auto& r : e["roles"]) roles.set(cs::role_index(*cs::parse_credit_role(r.get<std::string>())));
      expected[idx] = roles;
    }
    std::set<std::size_t> authors;
    for (const auto& [a, _] : expected) authors.insert(a);
    for (std::size_t a = 0; a < parsed.assignment.roles.size(); ++a) {
      if (parsed.assignment.roles[a].any()) authors.insert(a);
    }
    for (std::size_t a : authors) {
      ++compared;
      const auto it = expected.find(a);
      if (it != expected.end() && parsed.assignment.roles[a] == it->second) ++matched;
    }
  }
  o.require(sentences == 50, fmt::format("fixture has {} sentences", sentences));
  const double rate = compared == 0 ? 0.0 : static_cast<double>(matched) / compared;
  o.require(rate >= kParserBar, fmt::format("exact triple match {}/{} = {:.3f}", matched, compared, rate));
  if (o.pass) o.detail = fmt::format("exact triple match {}/{} = {:.3f}", matched, compared, rate);
  return o;
}

Outcome ac7_determinism() {
  Outcome o;
  const auto start = Clock::now();
  const std::string golden = cs::testing::read_text(cs::testing::fixture("golden/golden_report.json"));
  o.require(!golden.empty(), "golden report missing");
  const fs::path root = cs::testing::temp_dir("acceptance_e2e");
  int runs = 0;
  for (std::size_t jobs : {std::size_t{1}, std::size_t{8}}) {
    for (int i = 0; i < 10; ++i) {
      cs::PipelineConfig c;
      c.papers = cs::testing::fixture("golden/papers.jsonl");
      c.contexts = cs::testing::fixture("golden/contexts.jsonl");
      c.out = root / fmt::format("j{}_{}", jobs, i);
      c.jobs = jobs;
      // Second pass reuses the warm cache of the first.
      for (int pass = 0; pass < 2; ++pass) {
        o.require(cs::run_ingest(c).exit_code == 0, "ingest failed");
        const cs::StageResult cl = cs::run_classify(c);
        o.require(cl.exit_code == 0, "classify failed");
        if (pass == 1) o.require(cl.summary["backend_calls"] == 0, "warm cache missed");
        o.require(cs::run_parse_credit(c).exit_code == 0, "parse failed");
        o.require(cs::run_score(c).exit_code == 0, "score failed");
        o.require(cs::run_analyze(c, false).exit_code == 0, "analyze failed");
        o.require(cs::testing::read_text(cs::OutputLayout{c.out}.report()) == golden,
                  fmt::format("report differs (jobs={}, run={}, pass={})", jobs, i, pass));
        ++runs;
      }
    }
  }
  fs::remove_all(root);
  const double s = seconds_since(start);
  o.require(s < kAc7Seconds, fmt::format("took {:.1f}s", s));
  if (o.pass) o.detail = fmt::format("{} runs byte-identical in {:.1f}s", runs, s);
  return o;
}

Outcome ac8_self_normalization() {
  Outcome o;
  cs::PaperScores p;
  p.n_authors = 3;
  p.author_roles = std::vector<cs::RoleSet>{cs::role_set({R::Conceptualization, R::Software}),
                                            cs::role_set({R::Investigation}), cs::RoleSet{}};
  p.credit = cs::role_credit_scores<double>(*p.author_roles, p.n_authors);
  p.effort = cs::input_effort_distribution(*p.credit, cs::EffortMapping::standard());
  cs::TypeCounts counts;
  counts << 2, 1, 5, 1, 0;
  p.output = cs::output_distribution(counts);
  std::vector<cs::PaperScores> papers;
  for (int i = 0; i < 25; ++i) {
    p.paper_id = "same-" + std::to_string(i);
    papers.push_back(p);
  }
  std::size_t entries = 0;
  for (cs::GroupBy by : {cs::GroupBy::DominantInput, cs::GroupBy::DominantOutput}) {
    for (cs::ProfileOf of : {cs::ProfileOf::Output5, cs::ProfileOf::Input5, cs::ProfileOf::Roles14}) {
      const cs::GroupProfile g = cs::normalized_group_profile(papers, by, of);
      o.require(!g.normalized.empty(), "no groups");
      for (const auto& [type, v] : g.normalized) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          if (!g.defined.at(type)(i)) continue;
          ++entries;
          o.require(std::abs(v(i) - 1.0) <= kProfileTol,
                    fmt::format("{}/{} entry {} = {}", cs::to_string(by), cs::to_string(of), i, v(i)));
        }
      }
    }
  }
  if (o.pass) o.detail = fmt::format("{} defined entries equal 1", entries);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"AC1 Table 5 totals", ac1_table5},
      {"AC2 credit formula oracle", ac2_formula_oracle},
      {"AC3 Pearson fixture and invariance", ac3_pearson},
      {"AC4 co-occurrence suite", ac4_cooccurrence},
      {"AC5 co-type threshold boundary", ac5_threshold},
      {"AC6 parser fixture", ac6_parser},
      {"AC7 end-to-end determinism", ac7_determinism},
      {"AC8 group profile self-normalization", ac8_self_normalization},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
