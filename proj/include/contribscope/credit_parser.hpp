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

// Author contribution statements to per-author CRediT role sets.
//
// The chain is: split the statement into sentences, align author mentions
// with the contribution phrase they own, then map each phrase to roles with
// a pattern lexicon. Statements written one line per author ("L.C.: ...")
// skip alignment and go straight to role mapping line by line.

#ifndef CONTRIBSCOPE_CREDIT_PARSER_HPP_
#define CONTRIBSCOPE_CREDIT_PARSER_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contribscope/corpus.hpp"
#include "contribscope/text.hpp"
#include "contribscope/types.hpp"

namespace contribscope {

class NoStatementError : public Error {
 public:
  using Error::Error;
};

struct ContributionTriple {
  std::size_t author = 0;  // index into PaperRecord::authors
  std::string phrase;
  RoleSet roles;
  bool unmapped = false;  // set when roles is empty after mapping

  bool operator==(const ContributionTriple&) const = default;
};

struct AmbiguityNote {
  std::string sentence;
  std::string mention;
  std::vector<std::size_t> candidates;

  bool operator==(const AmbiguityNote&) const = default;
};

/// Per-author role sets plus the triples they were derived from. The role
/// set of an author is always the union of that author's triple roles.
struct AuthorRoleAssignment {
  std::vector<RoleSet> roles;  // one entry per author
  std::vector<ContributionTriple> provenance;

  void add(ContributionTriple triple);
  std::size_t credited_authors() const;
  bool empty() const { return credited_authors() == 0; }

  bool operator==(const AuthorRoleAssignment&) const = default;
};

class RoleLexicon {
 public:
  struct Entry {
    TermPattern pattern;
    RoleSet roles;
  };

  /// CSV with header `pattern,roles`; roles are `|`-separated canonical
  /// role names. Throws ValidationError naming the offending line.
  static RoleLexicon from_csv(std::istream& in);
  static RoleLexicon from_file(const std::filesystem::path& path);
  /// The lexicon shipped in data/role_lexicon.csv, compiled into the binary.
  static const RoleLexicon& default_lexicon();

  void add(std::string_view pattern, RoleSet roles);
  const std::vector<Entry>& entries() const { return entries_; }
  /// Roles producible by at least one entry.
  RoleSet coverage() const;

 private:
  std::vector<Entry> entries_;
};

/// Splits on sentence-final '.', '!' or '?' followed by whitespace, except
/// after dotted initials ("L.C."), "et al.", "e.g.", "i.e.", "Fig.", "Figs.",
/// "Dr.", "Prof.", "Ref.", "Refs." or when the next word starts lower case.
/// Two adjacent multi-letter initial runs ("by D.S. L.C. wrote") are
/// treated as a boundary. Semicolons never split. Output sentences are
/// trimmed; joining them with single spaces gives the normalized input.
std::vector<std::string> segment_statement(std::string_view statement);

/// Maps "all authors", "the authors", "the author", "all coauthors" and
/// "all co-authors" (any case) to every author index; anything else maps to
/// the empty set.
std::vector<std::size_t> resolve_referential(
    std::string_view subject, const std::vector<AuthorName>& authors);

/// The referential subjects above, lower case.
const std::vector<std::string>& referential_terms();

struct SentenceAlignment {
  std::vector<ContributionTriple> triples;  // roles empty at this stage
  std::vector<AmbiguityNote> ambiguities;
  /// True when no author could be paired with a contribution phrase.
  bool residue = false;
};

/// Finds author mentions (longest name variant first; referential terms
/// expand to all authors) and gives each author the contribution phrase
/// that belongs to its mention group. Clauses separated by ';' are aligned
/// independently. A name variant shared by two authors is ambiguous: it is
/// logged and resolves to nobody.
SentenceAlignment align_contributions(std::string_view sentence,
                                      const std::vector<AuthorName>& authors);

/// Union of the roles of every lexicon entry that matches the phrase.
RoleSet map_roles(std::string_view phrase, const RoleLexicon& lexicon);

/// If `line` has the shape "<author>: <text>" where <author> is one of the
/// name variants or a referential subject, returns the author indices and
/// the text after the colon. An ambiguous variant returns every candidate.
std::optional<std::pair<std::vector<std::size_t>, std::string>>
split_structured_line(std::string_view line,
                      const std::vector<AuthorName>& authors);

/// True when at least one statement line names a single author before a
/// colon.
bool detect_structured(std::string_view statement,
                       const std::vector<AuthorName>& authors);

struct ParsedStatement {
  AuthorRoleAssignment assignment;
  std::vector<std::string> residue;
  std::vector<std::string> unmapped;
  std::vector<AmbiguityNote> ambiguities;
  std::size_t sentences = 0;
  std::size_t aligned_sentences = 0;
  std::size_t residue_sentences = 0;
  std::size_t ambiguous_sentences = 0;
  bool structured = false;
};

/// Throws NoStatementError when the paper has no contribution statement.
ParsedStatement parse_statement(const PaperRecord& paper,
                                const RoleLexicon& lexicon);

}  // namespace contribscope

#endif  // CONTRIBSCOPE_CREDIT_PARSER_HPP_
