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

// Data model for papers and citation contexts, and the line-delimited JSON
// loader that validates them.

#ifndef CONTRIBSCOPE_CORPUS_HPP_
#define CONTRIBSCOPE_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contribscope/types.hpp"

namespace contribscope {

/// Literal token marking the cited reference inside a citation context.
inline constexpr std::string_view kPlaceholder = "[target cited reference]";

/// Name variants used to find an author in a contribution statement.
///
/// For a name with tokens t1..tk (k >= 2) the variants are, in order:
/// dotted initials "T1.T2.Tk.", first initial plus surname "T1. Tk", the
/// surname "Tk", and the full name. Hyphenated given names keep the hyphen
/// ("Jean-Pierre Dupont" gives "J.-P.D."). A single-token name yields only
/// itself. Duplicates are removed keeping first occurrence.
std::vector<std::string> derive_initial_forms(std::string_view full_name);

struct AuthorName {
  std::string full_name;
  std::vector<std::string> initial_forms;
  std::vector<std::string> aliases;

  /// Trims and NFC-normalizes `full_name` and fills initial_forms.
  /// Throws ValidationError on an empty name.
  static AuthorName from(std::string_view full_name,
                         std::vector<std::string> aliases = {});

  bool operator==(const AuthorName&) const = default;
};

struct PaperRecord {
  std::string paper_id;
  std::string journal;
  int year = 0;
  std::vector<std::string> disciplines;
  std::vector<AuthorName> authors;
  std::optional<std::string> contribution_statement;
  /// True when the statement uses the one-line-per-author "Name: text" form.
  bool statement_structured = false;

  bool operator==(const PaperRecord&) const = default;
};

enum class LabelSource { Gold, Lexicon, External };

std::string_view to_string(LabelSource s);
std::optional<LabelSource> parse_label_source(std::string_view s);

struct CitationContext {
  std::string context_id;
  std::string cited_paper_id;
  std::optional<std::string> citing_paper_id;
  /// Normalized text; contains kPlaceholder at least once.
  std::string text;
  std::optional<ContributionType> label;
  std::optional<LabelSource> label_source;
  std::optional<double> confidence;

  bool operator==(const CitationContext&) const = default;
};

/// Papers in load order, with their citation contexts grouped per paper.
/// Immutable once loaded; classification produces a new Corpus.
class Corpus {
 public:
  enum class AddResult { Added, Replaced, Orphan };

  /// Throws ValidationError on an empty or duplicate paper_id.
  void add_paper(PaperRecord paper);

  /// Adds a context to the group of its cited paper. A context whose
  /// context_id was seen before replaces the earlier record.
  AddResult add_context(CitationContext context);

  const std::vector<PaperRecord>& papers() const { return papers_; }
  std::size_t paper_count() const { return papers_.size(); }
  std::size_t context_count() const { return context_index_.size(); }

  std::optional<std::size_t> paper_index(std::string_view paper_id) const;
  const PaperRecord* find_paper(std::string_view paper_id) const;

  const std::vector<CitationContext>& contexts_of(std::size_t paper) const {
    return contexts_[paper];
  }
  std::vector<CitationContext>& mutable_contexts_of(std::size_t paper) {
    return contexts_[paper];
  }

  bool operator==(const Corpus& other) const {
    return papers_ == other.papers_ && contexts_ == other.contexts_;
  }

 private:
  std::vector<PaperRecord> papers_;
  std::unordered_map<std::string, std::size_t> paper_index_;
  std::vector<std::vector<CitationContext>> contexts_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>>
      context_index_;
};

struct Rejection {
  std::string file;  // "papers" or "contexts"
  std::size_t line_number = 0;
  std::string reason;
  std::string raw;
};

struct LoadStats {
  std::size_t paper_lines = 0;
  std::size_t context_lines = 0;
  std::size_t papers_accepted = 0;
  std::size_t contexts_accepted = 0;
  std::size_t multiple_placeholder_warnings = 0;
  std::size_t duplicate_context_warnings = 0;
};

struct LoadResult {
  Corpus corpus;
  std::vector<Rejection> rejections;
  LoadStats stats;
};

/// Loads and validates a corpus. Records that fail validation are returned
/// in `rejections` with their 1-based line number; blank lines are ignored.
/// Throws IoError when a file cannot be read.
LoadResult load_corpus(const std::filesystem::path& papers_path,
                       const std::filesystem::path& contexts_path);
LoadResult load_corpus(std::istream& papers, std::istream& contexts);

void write_papers(std::ostream& out, const Corpus& corpus);
void write_contexts(std::ostream& out, const Corpus& corpus);
void write_rejections(std::ostream& out, const std::vector<Rejection>& rejections);

}  // namespace contribscope

#endif  // CONTRIBSCOPE_CORPUS_HPP_
