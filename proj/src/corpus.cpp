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

#include "contribscope/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "contribscope/credit_parser.hpp"
#include "contribscope/text.hpp"

namespace contribscope {
namespace {

using nlohmann::json;

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::string first_codepoint(std::string_view token) {
  if (token.empty()) return {};
  std::size_t n = std::min(utf8_length(static_cast<unsigned char>(token[0])),
                           token.size());
  std::string out(token.substr(0, n));
  if (n == 1 && out[0] >= 'a' && out[0] <= 'z') {
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
  }
  return out;
}

// "Liyue" -> "L.", "Jean-Pierre" -> "J.-P."
std::string dotted_initial(std::string_view token) {
  std::string out;
  std::size_t start = 0;
  while (start <= token.size()) {
    std::size_t dash = token.find('-', start);
    std::string_view part = token.substr(
        start, dash == std::string_view::npos ? std::string_view::npos
                                              : dash - start);
    if (!part.empty()) {
      if (!out.empty()) out += '-';
      out += first_codepoint(part);
      out += '.';
    }
    if (dash == std::string_view::npos) break;
    start = dash + 1;
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

class RejectionError {
 public:
  explicit RejectionError(std::string reason) : reason(std::move(reason)) {}
  std::string reason;
};

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    throw RejectionError(std::string("missing field: ") + field);
  }
  return *it;
}

std::string require_string(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_string()) throw RejectionError(std::string("invalid field: ") + field);
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw RejectionError(std::string("invalid field: ") + field);
  return it->get<std::string>();
}

std::vector<std::string> string_array(const json& v, const char* field) {
  if (!v.is_array()) throw RejectionError(std::string("invalid field: ") + field);
  std::vector<std::string> out;
  for (const json& e : v) {
    if (!e.is_string()) throw RejectionError(std::string("invalid field: ") + field);
    out.push_back(e.get<std::string>());
  }
  return out;
}

PaperRecord parse_paper(const json& obj) {
  if (!obj.is_object()) throw RejectionError("malformed: not a JSON object");
  PaperRecord p;
  p.paper_id = trim(require_string(obj, "paper_id"));
  if (p.paper_id.empty()) throw RejectionError("invalid field: paper_id");
  p.journal = require_string(obj, "journal");
  const json& year = require(obj, "year");
  if (!year.is_number_integer()) throw RejectionError("invalid field: year");
  const auto y = year.get<long long>();
  if (y < 1900 || y > 2100) throw RejectionError("year out of range");
  p.year = static_cast<int>(y);
  p.disciplines = string_array(require(obj, "disciplines"), "disciplines");
  const auto names = string_array(require(obj, "authors"), "authors");
  if (names.empty()) throw RejectionError("empty authors");
  for (const std::string& n : names) {
    if (trim(n).empty()) throw RejectionError("invalid field: authors");
    p.authors.push_back(AuthorName::from(n));
  }
  p.contribution_statement = optional_string(obj, "contribution_statement");
  if (p.contribution_statement && trim(*p.contribution_statement).empty()) {
    p.contribution_statement.reset();
  }
  if (p.contribution_statement) {
    p.statement_structured =
        detect_structured(*p.contribution_statement, p.authors);
  }
  return p;
}

CitationContext parse_context(const json& obj) {
  if (!obj.is_object()) throw RejectionError("malformed: not a JSON object");
  CitationContext c;
  c.context_id = trim(require_string(obj, "context_id"));
  if (c.context_id.empty()) throw RejectionError("invalid field: context_id");
  c.cited_paper_id = trim(require_string(obj, "cited_paper_id"));
  c.text = normalize_text(require_string(obj, "text"));
  c.citing_paper_id = optional_string(obj, "citing_paper_id");
  if (auto label = optional_string(obj, "label")) {
    c.label = parse_contribution_type(*label);
    if (!c.label) throw RejectionError("invalid field: label");
  }
  if (auto source = optional_string(obj, "label_source")) {
    c.label_source = parse_label_source(*source);
    if (!c.label_source) throw RejectionError("invalid field: label_source");
  }
  if (auto it = obj.find("confidence"); it != obj.end() && !it->is_null()) {
    if (!it->is_number()) throw RejectionError("invalid field: confidence");
    const double v = it->get<double>();
    if (!(v >= 0.0 && v <= 1.0)) throw RejectionError("invalid field: confidence");
    c.confidence = v;
  }
  if (c.label && !c.label_source) throw RejectionError("label without label_source");
  if (c.text.find(kPlaceholder) == std::string::npos) {
    throw RejectionError("missing placeholder");
  }
  return c;
}

template <typename Handler>
void for_each_record(std::istream& in, const char* file,
                     std::vector<Rejection>& rejections, std::size_t& lines,
                     Handler&& handle) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++lines;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    try {
      if (obj.is_discarded()) throw RejectionError("malformed json");
      handle(obj);
    } catch (const RejectionError& e) {
      rejections.push_back({file, line_number, e.reason, line});
    } catch (const ValidationError& e) {
      rejections.push_back({file, line_number, e.what(), line});
    }
  }
}

}  // namespace

std::vector<std::string> derive_initial_forms(std::string_view full_name) {
  const std::vector<std::string> tokens = split_ws(normalize_text(full_name));
  if (tokens.empty()) return {};
  const std::string full = normalize_text(full_name);
  if (tokens.size() == 1) return {full};

  std::string initials;
  for (const std::string& t : tokens) initials += dotted_initial(t);
  const std::string& surname = tokens.back();
  std::vector<std::string> forms = {
      initials, dotted_initial(tokens.front()) + " " + surname, surname, full};

  std::vector<std::string> unique;
  for (std::string& f : forms) {
    if (std::find(unique.begin(), unique.end(), f) == unique.end()) {
      unique.push_back(std::move(f));
    }
  }
  return unique;
}

AuthorName AuthorName::from(std::string_view full_name,
                            std::vector<std::string> aliases) {
  AuthorName a;
  a.full_name = normalize_text(full_name);
  if (a.full_name.empty()) throw ValidationError("empty author name");
  a.initial_forms = derive_initial_forms(a.full_name);
  a.aliases = std::move(aliases);
  return a;
}

std::string_view to_string(LabelSource s) {
  switch (s) {
    case LabelSource::Gold:
      return "gold";
    case LabelSource::Lexicon:
      return "lexicon";
    case LabelSource::External:
      return "external";
  }
  return "gold";
}

std::optional<LabelSource> parse_label_source(std::string_view s) {
  if (s == "gold") return LabelSource::Gold;
  if (s == "lexicon") return LabelSource::Lexicon;
  if (s == "external") return LabelSource::External;
  return std::nullopt;
}

void Corpus::add_paper(PaperRecord paper) {
  if (paper.paper_id.empty()) throw ValidationError("empty paper_id");
  if (paper_index_.count(paper.paper_id) != 0) {
    throw ValidationError("duplicate paper_id");
  }
  paper_index_.emplace(paper.paper_id, papers_.size());
  papers_.push_back(std::move(paper));
  contexts_.emplace_back();
}

Corpus::AddResult Corpus::add_context(CitationContext context) {
  auto target = paper_index_.find(context.cited_paper_id);
  if (target == paper_index_.end()) return AddResult::Orphan;
  const std::size_t paper = target->second;

  auto existing = context_index_.find(context.context_id);
  if (existing == context_index_.end()) {
    context_index_.emplace(context.context_id,
                           std::make_pair(paper, contexts_[paper].size()));
    contexts_[paper].push_back(std::move(context));
    return AddResult::Added;
  }

  // Last record wins: drop the old one and append the new one to its group.
  auto [old_paper, old_pos] = existing->second;
  auto& old_group = contexts_[old_paper];
  old_group.erase(old_group.begin() + static_cast<std::ptrdiff_t>(old_pos));
  for (std::size_t i = old_pos; i < old_group.size(); ++i) {
    context_index_[old_group[i].context_id].second = i;
  }
  existing->second = std::make_pair(paper, contexts_[paper].size());
  contexts_[paper].push_back(std::move(context));
  return AddResult::Replaced;
}

std::optional<std::size_t> Corpus::paper_index(std::string_view paper_id) const {
  auto it = paper_index_.find(std::string(paper_id));
  if (it == paper_index_.end()) return std::nullopt;
  return it->second;
}

const PaperRecord* Corpus::find_paper(std::string_view paper_id) const {
  auto idx = paper_index(paper_id);
  return idx ? &papers_[*idx] : nullptr;
}

LoadResult load_corpus(std::istream& papers, std::istream& contexts) {
  LoadResult result;
  for_each_record(papers, "papers", result.rejections, result.stats.paper_lines,
                  [&](const json& obj) {
                    PaperRecord p = parse_paper(obj);
                    if (result.corpus.find_paper(p.paper_id) != nullptr) {
                      throw RejectionError("duplicate paper_id");
                    }
                    result.corpus.add_paper(std::move(p));
                    ++result.stats.papers_accepted;
                  });
  for_each_record(
      contexts, "contexts", result.rejections, result.stats.context_lines,
      [&](const json& obj) {
        CitationContext c = parse_context(obj);
        const bool multiple = count_occurrences(c.text, kPlaceholder) > 1;
        switch (result.corpus.add_context(std::move(c))) {
          case Corpus::AddResult::Orphan:
            throw RejectionError("orphan");
          case Corpus::AddResult::Replaced:
            ++result.stats.duplicate_context_warnings;
            break;
          case Corpus::AddResult::Added:
            break;
        }
        if (multiple) ++result.stats.multiple_placeholder_warnings;
        ++result.stats.contexts_accepted;
      });
  return result;
}

LoadResult load_corpus(const std::filesystem::path& papers_path,
                       const std::filesystem::path& contexts_path) {
  std::ifstream papers(papers_path);
  if (!papers) throw IoError("cannot read papers file: " + papers_path.string());
  std::ifstream contexts(contexts_path);
  if (!contexts) {
    throw IoError("cannot read contexts file: " + contexts_path.string());
  }
  return load_corpus(papers, contexts);
}

void write_papers(std::ostream& out, const Corpus& corpus) {
  for (const PaperRecord& p : corpus.papers()) {
    json obj = json::object();
    obj["paper_id"] = p.paper_id;
    obj["journal"] = p.journal;
    obj["year"] = p.year;
    obj["disciplines"] = p.disciplines;
    json authors = json::array();
    for (const AuthorName& a : p.authors) authors.push_back(a.full_name);
    obj["authors"] = std::move(authors);
    if (p.contribution_statement) {
      obj["contribution_statement"] = *p.contribution_statement;
    }
    out << obj.dump() << '\n';
  }
}

void write_contexts(std::ostream& out, const Corpus& corpus) {
  for (std::size_t i = 0; i < corpus.paper_count(); ++i) {
    for (const CitationContext& c : corpus.contexts_of(i)) {
      json obj = json::object();
      obj["context_id"] = c.context_id;
      obj["cited_paper_id"] = c.cited_paper_id;
      if (c.citing_paper_id) obj["citing_paper_id"] = *c.citing_paper_id;
      obj["text"] = c.text;
      if (c.label) obj["label"] = std::string(to_string(*c.label));
      if (c.label_source) {
        obj["label_source"] = std::string(to_string(*c.label_source));
      }
      if (c.confidence) obj["confidence"] = *c.confidence;
      out << obj.dump() << '\n';
    }
  }
}

void write_rejections(std::ostream& out,
                      const std::vector<Rejection>& rejections) {
  for (const Rejection& r : rejections) {
    json obj = json::object();
    obj["file"] = r.file;
    obj["line_number"] = r.line_number;
    obj["reason"] = r.reason;
    obj["raw"] = r.raw;
    out << obj.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

}  // namespace contribscope
