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

#include "contribscope/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "contribscope/credit_parser.hpp"
#include "contribscope/parallel.hpp"
#include "contribscope/text.hpp"

#ifndef CONTRIBSCOPE_VERSION
#define CONTRIBSCOPE_VERSION "0.0.0"
#endif

namespace contribscope {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string file_digest(const fs::path& path) { return sha256_hex(read_file(path)); }

void require_artifact(const fs::path& path, std::string_view producer) {
  if (!fs::is_regular_file(path)) {
    throw IoError("missing artifact " + path.string() + "; run `" +
                          std::string(producer) + "` first");
  }
}

void require_input(const fs::path& path, std::string_view what) {
  if (path.empty()) throw ValidationError(std::string(what) + " path is not set");
  if (!fs::is_regular_file(path)) {
    throw ValidationError(std::string(what) + " file not found: " + path.string());
  }
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void write_manifest(const OutputLayout& layout, std::string_view stage,
                    const PipelineConfig& config, ojson inputs, Clock::time_point start,
                    const StageResult& result) {
  ojson m = ojson::object();
  m["stage"] = std::string(stage);
  m["tool_version"] = std::string(tool_version());
  m["config"] = config.snapshot();
  m["inputs"] = std::move(inputs);
  m["elapsed_ms"] = elapsed_ms(start);
  m["exit_code"] = result.exit_code;
  m["summary"] = result.summary;
  write_file(layout.manifest(stage), m.dump(2) + "\n");
}

Corpus load_snapshot(const OutputLayout& layout, bool labeled) {
  require_artifact(layout.corpus_papers(), "ingest");
  const fs::path contexts = labeled ? layout.labeled_contexts() : layout.corpus_contexts();
  require_artifact(contexts, labeled ? "classify" : "ingest");
  LoadResult loaded = load_corpus(layout.corpus_papers(), contexts);
  if (!loaded.rejections.empty()) {
    const Rejection& r = loaded.rejections.front();
    throw ValidationError("corrupt snapshot " + r.file + " line " +
                          std::to_string(r.line_number) + ": " + r.reason);
  }
  return std::move(loaded.corpus);
}

const EffortMapping& mapping_for(const PipelineConfig& config, EffortMapping& storage) {
  if (!config.mapping) return EffortMapping::standard();
  storage = EffortMapping::from_file(*config.mapping);
  return storage;
}

ojson role_names_json(const RoleSet& roles) {
  ojson a = ojson::array();
  for (std::size_t l = 0; l < kNumRoles; ++l) {
    if (roles.test(l)) a.push_back(std::string(to_string(role_at(l))));
  }
  return a;
}

ojson classify_stats_json(const ClassifyStats& s, std::string_view backend) {
  ojson o = ojson::object();
  o["backend"] = std::string(backend);
  ojson counts = ojson::object();
  for (ContributionType t : kAllTypes) {
    counts[std::string(to_string(t))] = s.label_counts[type_index(t)];
  }
  o["label_counts"] = std::move(counts);
  o["contexts"] = s.contexts;
  o["gold"] = s.gold;
  o["previously_labeled"] = s.previously_labeled;
  o["classified"] = s.classified;
  o["cache_hits"] = s.cache_hits;
  o["backend_calls"] = s.backend_calls;
  o["protocol_violations"] = s.protocol_violations;
  o["backend_failures"] = s.backend_failures;
  o["unlabeled"] = s.unlabeled;
  o["cache_hit_rate"] = s.cache_hit_rate();
  o["backend_error"] = s.backend_error ? ojson(*s.backend_error) : ojson(nullptr);
  return o;
}

ojson assignment_json(const PaperRecord& paper, const ParsedStatement& parsed) {
  ojson o = ojson::object();
  o["paper_id"] = paper.paper_id;
  ojson by_name = ojson::object();
  for (std::size_t a = 0; a < paper.authors.size(); ++a) {
    by_name[paper.authors[a].full_name] = role_names_json(parsed.assignment.roles.at(a));
  }
  o["assignments"] = std::move(by_name);
  o["structured"] = parsed.structured;
  o["sentences"] = parsed.sentences;
  ojson authors = ojson::array();
  for (std::size_t a = 0; a < paper.authors.size(); ++a) {
    ojson entry = ojson::object();
    entry["name"] = paper.authors[a].full_name;
    entry["roles"] = role_names_json(parsed.assignment.roles.at(a));
    authors.push_back(std::move(entry));
  }
  o["authors"] = std::move(authors);
  ojson triples = ojson::array();
  for (const ContributionTriple& t : parsed.assignment.provenance) {
    ojson entry = ojson::object();
    entry["author"] = paper.authors.at(t.author).full_name;
    entry["phrase"] = t.phrase;
    entry["roles"] = role_names_json(t.roles);
    triples.push_back(std::move(entry));
  }
  o["triples"] = std::move(triples);
  o["residue"] = parsed.residue;
  o["unmapped"] = parsed.unmapped;
  ojson ambiguities = ojson::array();
  for (const AmbiguityNote& n : parsed.ambiguities) {
    ojson entry = ojson::object();
    entry["sentence"] = n.sentence;
    entry["mention"] = n.mention;
    ojson candidates = ojson::array();
    for (std::size_t c : n.candidates) candidates.push_back(paper.authors.at(c).full_name);
    entry["candidates"] = std::move(candidates);
    ambiguities.push_back(std::move(entry));
  }
  o["ambiguities"] = std::move(ambiguities);
  return o;
}

std::string dump_line(const ojson& o) {
  return o.dump(-1, ' ', false, ojson::error_handler_t::replace) + "\n";
}

template <typename Fn>
void for_each_json_line(const fs::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw ValidationError(path.string() + " line " + std::to_string(number) +
                            ": malformed json");
    }
    try {
      fn(obj);
    } catch (const json::exception& e) {
      throw ValidationError(path.string() + " line " + std::to_string(number) + ": " +
                            e.what());
    }
  }
}

}  // namespace

std::string_view tool_version() { return CONTRIBSCOPE_VERSION; }

void PipelineConfig::validate(bool need_inputs) const {
  if (need_inputs) {
    require_input(papers, "papers");
    require_input(contexts, "contexts");
  }
  if (cue_lexicon) {
    require_input(*cue_lexicon, "cue lexicon");
    CueLexicon::from_file(*cue_lexicon);
  }
  if (role_lexicon) {
    require_input(*role_lexicon, "role lexicon");
    RoleLexicon::from_file(*role_lexicon);
  }
  if (mapping) {
    require_input(*mapping, "mapping");
    EffortMapping::from_file(*mapping);
  }
  if (backend != "lexicon" && backend != "external") {
    throw ValidationError("backend must be `lexicon` or `external`, got `" + backend + "`");
  }
  if (backend == "external") {
    if (!endpoint.url.starts_with("http://") && !endpoint.url.starts_with("https://")) {
      throw ValidationError("external backend needs an http(s) endpoint url");
    }
  }
  if (endpoint.max_retries < 0) throw ValidationError("endpoint retries must be >= 0");
  if (endpoint.timeout.count() <= 0) throw ValidationError("endpoint timeout must be > 0");
  if (endpoint.initial_backoff.count() < 0) {
    throw ValidationError("endpoint backoff must be >= 0");
  }
  analysis.validate();
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
  if (out.empty()) throw ValidationError("output directory is not set");
}

ojson PipelineConfig::snapshot() const {
  auto path_or_null = [](const std::optional<fs::path>& p) {
    return p ? ojson(p->string()) : ojson(nullptr);
  };
  ojson o = ojson::object();
  o["papers"] = papers.string();
  o["contexts"] = contexts.string();
  o["cue_lexicon"] = path_or_null(cue_lexicon);
  o["role_lexicon"] = path_or_null(role_lexicon);
  o["mapping"] = path_or_null(mapping);
  o["backend"] = backend;
  ojson e = ojson::object();
  e["url"] = endpoint.url;
  e["prompt_template"] = endpoint.prompt_template;
  e["retries"] = endpoint.max_retries;
  e["backoff_ms"] = endpoint.initial_backoff.count();
  e["timeout_ms"] = endpoint.timeout.count();
  o["endpoint"] = std::move(e);
  o["cache_dir"] = effective_cache_dir().string();
  o["threshold"] = analysis.threshold;
  o["types"] = analysis.types;
  o["correlation_types"] = analysis.correlation_types;
  o["norm"] = std::string(to_string(analysis.norm));
  o["out"] = out.string();
  o["jobs"] = jobs;
  o["seed"] = seed;
  return o;
}

fs::path PipelineConfig::effective_cache_dir() const {
  return cache_dir ? *cache_dir : out / "cache";
}

StageResult run_ingest(const PipelineConfig& config) {
  config.validate(true);
  const auto start = Clock::now();
  const OutputLayout layout{config.out};
  LoadResult loaded = load_corpus(config.papers, config.contexts);

  std::ostringstream papers;
  std::ostringstream contexts;
  std::ostringstream rejections;
  write_papers(papers, loaded.corpus);
  write_contexts(contexts, loaded.corpus);
  write_rejections(rejections, loaded.rejections);
  write_file(layout.corpus_papers(), papers.str());
  write_file(layout.corpus_contexts(), contexts.str());
  write_file(layout.rejections(), rejections.str());

  StageResult result;
  ojson& s = result.summary;
  s["paper_lines"] = loaded.stats.paper_lines;
  s["context_lines"] = loaded.stats.context_lines;
  s["papers_accepted"] = loaded.stats.papers_accepted;
  s["contexts_accepted"] = loaded.corpus.context_count();
  s["rejections"] = loaded.rejections.size();
  std::map<std::string, std::size_t> reasons;
  for (const Rejection& r : loaded.rejections) ++reasons[r.reason];
  s["rejections_by_reason"] = reasons;
  s["multiple_placeholder_warnings"] = loaded.stats.multiple_placeholder_warnings;
  s["duplicate_context_warnings"] = loaded.stats.duplicate_context_warnings;

  ojson inputs = ojson::object();
  inputs[config.papers.string()] = file_digest(config.papers);
  inputs[config.contexts.string()] = file_digest(config.contexts);
  write_manifest(layout, "ingest", config, std::move(inputs), start, result);
  return result;
}

StageResult run_classify(const PipelineConfig& config) {
  config.validate(false);
  const auto start = Clock::now();
  const OutputLayout layout{config.out};
  const Corpus corpus = load_snapshot(layout, false);

  std::unique_ptr<ClassifierBackend> backend;
  if (config.backend == "external") {
    EndpointConfig endpoint = config.endpoint;
    if (endpoint.token.empty()) endpoint.token = EndpointConfig::token_from_env();
    backend = std::make_unique<ExternalBackend>(std::move(endpoint));
  } else {
    backend = std::make_unique<LexiconBackend>(
        config.cue_lexicon ? CueLexicon::from_file(*config.cue_lexicon)
                           : CueLexicon::default_lexicon());
  }
  ClassificationCache cache(config.effective_cache_dir());
  const ClassifyResult classified = classify_corpus(corpus, *backend, cache, config.jobs);

  StageResult result;
  result.summary = classify_stats_json(classified.stats, backend->backend_id());
  write_file(layout.classify_stats(), result.summary.dump(2) + "\n");
  if (classified.backend_unavailable()) {
    // A partial snapshot must not feed the scoring stage.
    fs::remove(layout.labeled_contexts());
    result.exit_code = kExitBackend;
  } else {
    std::ostringstream contexts;
    write_contexts(contexts, classified.corpus);
    write_file(layout.labeled_contexts(), contexts.str());
  }

  ojson inputs = ojson::object();
  inputs[layout.corpus_papers().string()] = file_digest(layout.corpus_papers());
  inputs[layout.corpus_contexts().string()] = file_digest(layout.corpus_contexts());
  write_manifest(layout, "classify", config, std::move(inputs), start, result);
  return result;
}

StageResult run_parse_credit(const PipelineConfig& config) {
  config.validate(false);
  const auto start = Clock::now();
  const OutputLayout layout{config.out};
  const Corpus corpus = load_snapshot(layout, false);
  const RoleLexicon lexicon = config.role_lexicon ? RoleLexicon::from_file(*config.role_lexicon)
                                                  : RoleLexicon::default_lexicon();

  const std::vector<PaperRecord>& papers = corpus.papers();
  std::vector<std::optional<ParsedStatement>> parsed(papers.size());
  parallel_for(papers.size(), config.jobs, [&](std::size_t i) {
    if (papers[i].contribution_statement) parsed[i] = parse_statement(papers[i], lexicon);
  });

  std::string lines;
  std::size_t with_statement = 0, structured = 0, sentences = 0, aligned = 0, residue = 0,
              ambiguous = 0, unmapped = 0, empty = 0;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    if (!parsed[i]) continue;
    const ParsedStatement& p = *parsed[i];
    ++with_statement;
    if (p.structured) ++structured;
    sentences += p.sentences;
    aligned += p.aligned_sentences;
    residue += p.residue_sentences;
    ambiguous += p.ambiguous_sentences;
    unmapped += p.unmapped.size();
    if (p.assignment.empty()) ++empty;
    lines += dump_line(assignment_json(papers[i], p));
  }
  write_file(layout.assignments(), lines);

  StageResult result;
  ojson& s = result.summary;
  s["papers"] = papers.size();
  s["with_statement"] = with_statement;
  s["without_statement"] = papers.size() - with_statement;
  s["structured"] = structured;
  s["sentences"] = sentences;
  s["aligned_sentences"] = aligned;
  s["residue_sentences"] = residue;
  s["ambiguous_sentences"] = ambiguous;
  s["unmapped_phrases"] = unmapped;
  s["empty_assignments"] = empty;
  write_file(layout.parse_stats(), s.dump(2) + "\n");

  ojson inputs = ojson::object();
  inputs[layout.corpus_papers().string()] = file_digest(layout.corpus_papers());
  write_manifest(layout, "parse-credit", config, std::move(inputs), start, result);
  return result;
}

std::vector<AssignmentRecord> read_assignments(const fs::path& path) {
  std::vector<AssignmentRecord> out;
  for_each_json_line(path, [&](const json& obj) {
    AssignmentRecord rec;
    rec.paper_id = obj.at("paper_id").get<std::string>();
    for (const json& author : obj.at("authors")) {
      rec.authors.push_back(author.at("name").get<std::string>());
      RoleSet roles;
      for (const json& name : author.at("roles")) {
        auto role = parse_credit_role(name.get<std::string>());
        if (!role) throw ValidationError("unknown role " + name.dump() + " in " + path.string());
        roles.set(role_index(*role));
      }
      rec.roles.push_back(roles);
    }
    out.push_back(std::move(rec));
  });
  return out;
}

std::vector<PaperScores> read_scores(const fs::path& path) {
  std::vector<PaperScores> out;
  for_each_json_line(path, [&](const json& obj) { out.push_back(paper_scores_from_json(obj)); });
  return out;
}

StageResult run_score(const PipelineConfig& config) {
  config.validate(false);
  const auto start = Clock::now();
  const OutputLayout layout{config.out};
  const Corpus corpus = load_snapshot(layout, true);
  require_artifact(layout.assignments(), "parse-credit");
  const std::vector<AssignmentRecord> assignments = read_assignments(layout.assignments());
  std::unordered_map<std::string, std::size_t> by_paper;
  for (std::size_t i = 0; i < assignments.size(); ++i) by_paper[assignments[i].paper_id] = i;
  EffortMapping storage;
  const EffortMapping& mapping = mapping_for(config, storage);

  const std::vector<PaperRecord>& papers = corpus.papers();
  std::vector<PaperScores> scores(papers.size());
  parallel_for(papers.size(), config.jobs, [&](std::size_t i) {
    const PaperRecord& paper = papers[i];
    PaperScores& s = scores[i];
    s.paper_id = paper.paper_id;
    s.n_authors = static_cast<int>(paper.authors.size());
    s.disciplines = paper.disciplines;
    if (auto it = by_paper.find(paper.paper_id); it != by_paper.end()) {
      const AssignmentRecord& rec = assignments[it->second];
      if (rec.roles.size() != paper.authors.size()) {
        throw ValidationError("assignment of " + paper.paper_id +
                              " does not match its author list");
      }
      s.author_roles = rec.roles;
      s.credit = role_credit_scores<double>(rec.roles, s.n_authors);
      s.effort = input_effort_distribution(*s.credit, mapping);
      if (!s.effort->defined()) s.flags.push_back("empty_assignment");
    } else {
      s.flags.push_back(paper.contribution_statement ? "no_assignment" : "no_statement");
    }
    TypeCounts counts = TypeCounts::Zero();
    for (const CitationContext& c : corpus.contexts_of(i)) {
      if (c.label) {
        ++counts(static_cast<Eigen::Index>(type_index(*c.label)));
      } else {
        ++s.unlabeled_contexts;
      }
    }
    s.output = output_distribution(counts);
    if (s.unlabeled_contexts > 0) s.flags.push_back("unlabeled_contexts");
    if (s.output.total == 0) s.flags.push_back("no_contexts");
  });

  std::string lines;
  std::size_t input_defined = 0, output_defined = 0;
  std::map<std::string, std::size_t> flags;
  for (const PaperScores& s : scores) {
    lines += to_json(s).dump() + "\n";
    if (s.effort && s.effort->defined()) ++input_defined;
    if (s.output.defined()) ++output_defined;
    for (const std::string& f : s.flags) ++flags[f];
  }
  write_file(layout.scores(), lines);

  StageResult result;
  ojson& s = result.summary;
  s["papers"] = scores.size();
  s["input_defined"] = input_defined;
  s["output_defined"] = output_defined;
  s["flags"] = flags;

  ojson inputs = ojson::object();
  inputs[layout.corpus_papers().string()] = file_digest(layout.corpus_papers());
  inputs[layout.labeled_contexts().string()] = file_digest(layout.labeled_contexts());
  inputs[layout.assignments().string()] = file_digest(layout.assignments());
  write_manifest(layout, "score", config, std::move(inputs), start, result);
  return result;
}

StageResult run_analyze(const PipelineConfig& config, bool with_csv_exports) {
  config.validate(false);
  const auto start = Clock::now();
  const OutputLayout layout{config.out};
  require_artifact(layout.scores(), "score");
  const std::vector<PaperScores> scores = read_scores(layout.scores());
  EffortMapping storage;
  const EffortMapping& mapping = mapping_for(config, storage);

  const ojson report =
      build_report(std::span<const PaperScores>(scores), mapping, config.analysis);
  const std::string text = dump_report(report);
  write_file(layout.report(), text);

  StageResult result;
  ojson& s = result.summary;
  s["papers"] = scores.size();
  s["report_sha256"] = sha256_hex(text);
  if (with_csv_exports) s["exports"] = write_report_csvs(report, layout.root / "plots");

  ojson inputs = ojson::object();
  inputs[layout.scores().string()] = file_digest(layout.scores());
  write_manifest(layout, with_csv_exports ? "report" : "analyze", config, std::move(inputs),
                 start, result);
  return result;
}

}  // namespace contribscope
