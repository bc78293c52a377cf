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

#include "contribscope/credit_parser.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "contribscope/text.hpp"
#include "csv_reader.hpp"
#include "default_data.hpp"

namespace contribscope {
namespace {

bool is_word_byte(char c) {
  return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

bool is_upper_or_non_ascii(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || c >= 0x80;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

// Number of initials in a token shaped like "L.", "L.C.", "J.-P.D.", or 0
// if the token has any other shape.
std::size_t initials_in(std::string_view tok) {
  std::size_t i = 0;
  std::size_t letters = 0;
  while (i < tok.size()) {
    const auto lead = static_cast<unsigned char>(tok[i]);
    if (!is_upper_or_non_ascii(lead)) return 0;
    i += utf8_length(lead);
    if (i >= tok.size() || tok[i] != '.') return 0;
    ++i;
    ++letters;
    if (i < tok.size() && tok[i] == '-') ++i;
  }
  return letters;
}

std::string_view strip_openers(std::string_view tok) {
  while (!tok.empty() && (tok.front() == '(' || tok.front() == '[' ||
                          tok.front() == '"' || tok.front() == '\'')) {
    tok.remove_prefix(1);
  }
  return tok;
}

std::string_view token_before(std::string_view text, std::size_t end) {
  std::size_t b = text.rfind(' ', end == 0 ? 0 : end - 1);
  b = (b == std::string_view::npos) ? 0 : b + 1;
  return text.substr(b, end - b);
}

std::string_view token_at(std::string_view text, std::size_t begin) {
  std::size_t e = text.find(' ', begin);
  if (e == std::string_view::npos) e = text.size();
  return text.substr(begin, e - begin);
}

bool protected_period(std::string_view text, std::size_t period,
                      std::size_t next) {
  const std::string_view raw = token_before(text, period + 1);
  const std::string_view tok = strip_openers(raw);
  if (const std::size_t n = initials_in(tok); n > 0) {
    const std::string_view following = strip_openers(token_at(text, next));
    return !(n >= 2 && initials_in(following) >= 2);
  }
  static const std::set<std::string, std::less<>> kAbbreviations = {
      "e.g.", "i.e.", "fig.", "figs.", "dr.", "prof.", "ref.", "refs."};
  const std::string lowered = to_lower_ascii(tok);
  if (kAbbreviations.count(lowered) != 0) return true;
  if (lowered == "al.") {
    const std::size_t tok_begin = static_cast<std::size_t>(raw.data() - text.data());
    if (tok_begin >= 2) {
      return to_lower_ascii(token_before(text, tok_begin - 1)) == "et";
    }
  }
  return false;
}

bool is_closer(char c) {
  return c == ')' || c == ']' || c == '"' || c == '\'';
}

// ---------------------------------------------------------------------------
// Alignment

struct Mention {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::size_t> authors;
  bool ambiguous = false;
  std::string text;
};

struct Form {
  std::string text;
  std::vector<std::size_t> authors;
  bool referential = false;
};

std::vector<Form> build_forms(const std::vector<AuthorName>& authors) {
  std::vector<Form> forms;
  auto add = [&forms](const std::string& text, std::size_t author) {
    if (text.empty()) return;
    for (Form& f : forms) {
      if (!f.referential && f.text == text) {
        if (std::find(f.authors.begin(), f.authors.end(), author) ==
            f.authors.end()) {
          f.authors.push_back(author);
        }
        return;
      }
    }
    forms.push_back({text, {author}, false});
  };
  for (std::size_t i = 0; i < authors.size(); ++i) {
    for (const std::string& f : authors[i].initial_forms) add(f, i);
    for (const std::string& f : authors[i].aliases) add(normalize_text(f), i);
    // "L. C." spelling of dotted initials.
    const std::string& dotted = authors[i].initial_forms.front();
    if (authors[i].initial_forms.size() > 1 && dotted.size() > 2) {
      std::string spaced;
      for (std::size_t k = 0; k < dotted.size(); ++k) {
        spaced += dotted[k];
        if (dotted[k] == '.' && k + 1 < dotted.size() && dotted[k + 1] != '-') {
          spaced += ' ';
        }
      }
      add(spaced, i);
    }
  }
  std::vector<std::size_t> everyone(authors.size());
  for (std::size_t i = 0; i < authors.size(); ++i) everyone[i] = i;
  for (const std::string& term : referential_terms()) {
    forms.push_back({term, everyone, true});
  }
  std::stable_sort(forms.begin(), forms.end(), [](const Form& a, const Form& b) {
    if (a.text.size() != b.text.size()) return a.text.size() > b.text.size();
    return a.text < b.text;
  });
  return forms;
}

bool form_at(std::string_view text, std::size_t pos, const Form& form) {
  if (pos + form.text.size() > text.size()) return false;
  if (form.referential) {
    if (to_lower_ascii(text.substr(pos, form.text.size())) != form.text) {
      return false;
    }
  } else if (text.compare(pos, form.text.size(), form.text) != 0) {
    return false;
  }
  const std::size_t e = pos + form.text.size();
  return e == text.size() || !is_word_byte(text[e]);
}

std::vector<Mention> find_mentions(std::string_view text,
                                   const std::vector<Form>& forms) {
  std::vector<Mention> mentions;
  std::size_t i = 0;
  while (i < text.size()) {
    const bool word_start =
        i == 0 || !(is_word_byte(text[i - 1]) || text[i - 1] == '.' ||
                    text[i - 1] == '-');
    const Form* hit = nullptr;
    if (word_start) {
      for (const Form& f : forms) {
        if (form_at(text, i, f)) {
          hit = &f;
          break;
        }
      }
    }
    if (hit == nullptr) {
      ++i;
      continue;
    }
    Mention m;
    m.begin = i;
    m.end = i + hit->text.size();
    m.text = std::string(text.substr(m.begin, m.end - m.begin));
    m.ambiguous = !hit->referential && hit->authors.size() > 1;
    m.authors = hit->authors;
    mentions.push_back(std::move(m));
    i += hit->text.size();
  }
  return mentions;
}

bool is_connector(std::string_view text) {
  static const std::set<std::string, std::less<>> kConnectors = {
      "and", "as", "well", "both", "with", "together"};
  for (const std::string& tok : word_tokens(text)) {
    if (kConnectors.count(tok) == 0) return false;
  }
  return true;
}

struct Phrase {
  std::string text;
  bool ends_with_by = false;
};

bool is_trim_char(char c) {
  return c == ' ' || c == ',' || c == '.' || c == ';' || c == ':' || c == '(' ||
         c == ')' || c == '[' || c == ']' || c == '&' || c == '"' || c == '\'';
}

std::string strip_edges(std::string s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_trim_char(s[b])) ++b;
  while (e > b && is_trim_char(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool drop_leading_word(std::string& s, std::string_view word) {
  if (s.size() > word.size() && to_lower_ascii(s.substr(0, word.size())) == word &&
      !is_word_byte(s[word.size()])) {
    s = strip_edges(s.substr(word.size()));
    return true;
  }
  return false;
}

bool drop_trailing_word(std::string& s, std::string_view word) {
  if (s.size() < word.size()) return false;
  const std::size_t b = s.size() - word.size();
  if (to_lower_ascii(s.substr(b)) != word) return false;
  if (b > 0 && is_word_byte(s[b - 1])) return false;
  s = strip_edges(s.substr(0, b));
  return true;
}

Phrase clean_phrase(std::string_view raw) {
  Phrase p;
  std::string s = strip_edges(std::string(raw));
  bool changed = true;
  while (changed && !s.empty()) {
    changed = false;
    for (std::string_view w : {"and", "with", "together", "while", "whereas"}) {
      changed = drop_leading_word(s, w) || changed;
    }
    for (std::string_view w : {"and", "with", "together", "respectively"}) {
      changed = drop_trailing_word(s, w) || changed;
    }
    if (drop_trailing_word(s, "by")) {
      p.ends_with_by = true;
      changed = true;
    }
  }
  if (word_tokens(s).empty()) s.clear();
  p.text = std::move(s);
  return p;
}

struct Group {
  std::vector<std::size_t> authors;
  std::vector<std::string> phrases;
};

struct Item {
  bool is_group = false;
  std::size_t index = 0;  // into groups or phrases
};

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

const std::vector<std::string>& referential_terms() {
  static const std::vector<std::string> kTerms = {
      "all authors", "the authors", "the author", "all coauthors",
      "all co-authors"};
  return kTerms;
}

// ---------------------------------------------------------------------------

void AuthorRoleAssignment::add(ContributionTriple triple) {
  if (triple.author >= roles.size()) roles.resize(triple.author + 1);
  roles[triple.author] |= triple.roles;
  provenance.push_back(std::move(triple));
}

std::size_t AuthorRoleAssignment::credited_authors() const {
  return static_cast<std::size_t>(std::count_if(
      roles.begin(), roles.end(), [](const RoleSet& r) { return r.any(); }));
}

RoleLexicon RoleLexicon::from_csv(std::istream& in) {
  RoleLexicon lex;
  read_csv(in, {"pattern", "roles"},
           [&lex](std::size_t line, const std::vector<std::string>& fields) {
             RoleSet roles;
             std::stringstream list(fields[1]);
             std::string name;
             while (std::getline(list, name, '|')) {
               name = trim(name);
               if (name.empty()) continue;
               auto role = parse_credit_role(name);
               if (!role) {
                 throw ValidationError("role lexicon line " +
                                       std::to_string(line) +
                                       ": unknown role '" + name + "'");
               }
               roles.set(role_index(*role));
             }
             if (roles.none() || trim(fields[0]).empty()) {
               throw ValidationError("role lexicon line " + std::to_string(line) +
                                     ": empty pattern or role list");
             }
             lex.add(fields[0], roles);
           });
  return lex;
}

RoleLexicon RoleLexicon::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read role lexicon: " + path.string());
  return from_csv(in);
}

const RoleLexicon& RoleLexicon::default_lexicon() {
  static const RoleLexicon kDefault = [] {
    std::istringstream in{std::string(default_role_lexicon_csv())};
    return from_csv(in);
  }();
  return kDefault;
}

void RoleLexicon::add(std::string_view pattern, RoleSet roles) {
  entries_.push_back({TermPattern(pattern), roles});
}

RoleSet RoleLexicon::coverage() const {
  RoleSet all;
  for (const Entry& e : entries_) all |= e.roles;
  return all;
}

std::vector<std::string> segment_statement(std::string_view statement) {
  const std::string text = normalize_text(statement);
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t end = i + 1;
    while (end < text.size() && is_closer(text[end])) ++end;
    if (end >= text.size() || text[end] != ' ') continue;
    const std::size_t next = end + 1;
    if (next < text.size() && text[next] >= 'a' && text[next] <= 'z') continue;
    if (c == '.' && protected_period(text, i, next)) continue;
    std::string sentence = trim(std::string_view(text).substr(start, end - start));
    if (!sentence.empty()) out.push_back(std::move(sentence));
    start = next;
    i = end;
  }
  std::string rest = trim(std::string_view(text).substr(std::min(start, text.size())));
  if (!rest.empty()) out.push_back(std::move(rest));
  return out;
}

std::vector<std::size_t> resolve_referential(
    std::string_view subject, const std::vector<AuthorName>& authors) {
  const std::string key = to_lower_ascii(strip_edges(normalize_text(subject)));
  for (const std::string& term : referential_terms()) {
    if (key == term) {
      std::vector<std::size_t> all(authors.size());
      for (std::size_t i = 0; i < authors.size(); ++i) all[i] = i;
      return all;
    }
  }
  return {};
}

SentenceAlignment align_contributions(std::string_view sentence_in,
                                      const std::vector<AuthorName>& authors) {
  SentenceAlignment out;
  const std::string sentence = normalize_text(sentence_in);
  const std::vector<Form> forms = build_forms(authors);
  const std::vector<Mention> mentions = find_mentions(sentence, forms);

  for (const Mention& m : mentions) {
    if (m.ambiguous) out.ambiguities.push_back({sentence, m.text, m.authors});
  }

  std::vector<std::size_t> previous_clause_authors;
  std::size_t mention_cursor = 0;
  std::size_t clause_begin = 0;
  while (clause_begin <= sentence.size()) {
    std::size_t clause_end = sentence.find(';', clause_begin);
    if (clause_end == std::string::npos) clause_end = sentence.size();

    // Items of this clause: mention groups and phrases, in order.
    std::vector<Group> groups;
    std::vector<Phrase> phrases;
    std::vector<Item> items;
    std::size_t pos = clause_begin;
    bool joinable = false;  // last item is a group and only connectors since
    auto push_text = [&](std::size_t b, std::size_t e) {
      if (e <= b) return;
      const std::string_view raw = std::string_view(sentence).substr(b, e - b);
      if (is_connector(raw)) return;
      Phrase p = clean_phrase(raw);
      joinable = false;
      if (p.text.empty()) return;
      items.push_back({false, phrases.size()});
      phrases.push_back(std::move(p));
    };
    while (mention_cursor < mentions.size() &&
           mentions[mention_cursor].begin < clause_end) {
      const Mention& m = mentions[mention_cursor++];
      push_text(pos, m.begin);
      std::vector<std::size_t> resolved = m.ambiguous ? std::vector<std::size_t>{}
                                                      : m.authors;
      if (joinable && !items.empty() && items.back().is_group) {
        auto& g = groups[items.back().index].authors;
        g.insert(g.end(), resolved.begin(), resolved.end());
      } else {
        items.push_back({true, groups.size()});
        groups.push_back({std::move(resolved), {}});
      }
      joinable = true;
      pos = m.end;
    }
    push_text(pos, clause_end);

    auto is_group_at = [&](std::size_t k) {
      return k < items.size() && items[k].is_group;
    };
    auto is_phrase_at = [&](std::size_t k) {
      return k < items.size() && !items[k].is_group;
    };
    // Whether the group at k keeps the phrase that follows it.
    auto owns_following = [&](std::size_t k) {
      if (!is_phrase_at(k + 1)) return false;
      return !(phrases[items[k + 1].index].ends_with_by && is_group_at(k + 2));
    };

    bool any_group = !groups.empty();
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (items[k].is_group) continue;
      const Phrase& p = phrases[items[k].index];
      std::optional<std::size_t> owner;
      if (p.ends_with_by && is_group_at(k + 1)) {
        owner = k + 1;
      } else if (k > 0 && is_group_at(k - 1)) {
        owner = k - 1;
      } else if (is_group_at(k + 1) && !owns_following(k + 1)) {
        owner = k + 1;
      }
      if (owner) {
        groups[items[*owner].index].phrases.push_back(p.text);
      } else if (!any_group && !previous_clause_authors.empty()) {
        // A clause without mentions continues the previous clause's subject.
        groups.push_back({previous_clause_authors, {p.text}});
      }
    }

    for (Group& g : groups) {
      g.authors = sorted_unique(std::move(g.authors));
      for (std::size_t a : g.authors) {
        for (const std::string& phrase : g.phrases) {
          ContributionTriple t{a, phrase, {}, false};
          if (std::find(out.triples.begin(), out.triples.end(), t) ==
              out.triples.end()) {
            out.triples.push_back(std::move(t));
          }
        }
      }
    }
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
      if (!it->authors.empty()) {
        previous_clause_authors = it->authors;
        break;
      }
    }

    if (clause_end == sentence.size()) break;
    clause_begin = clause_end + 1;
  }

  out.residue = out.triples.empty();
  return out;
}

RoleSet map_roles(std::string_view phrase, const RoleLexicon& lexicon) {
  const std::vector<std::string> tokens = word_tokens(phrase);
  RoleSet roles;
  for (const RoleLexicon::Entry& e : lexicon.entries()) {
    if (e.pattern.matches(tokens)) roles |= e.roles;
  }
  return roles;
}

std::optional<std::pair<std::vector<std::size_t>, std::string>>
split_structured_line(std::string_view line_in,
                      const std::vector<AuthorName>& authors) {
  const std::string line = normalize_text(line_in);
  const std::size_t colon = line.find(':');
  if (colon == std::string::npos || colon == 0 || colon > 80) return std::nullopt;
  std::string subject = line.substr(0, colon);
  while (!subject.empty() &&
         (subject.front() == '-' || subject.front() == '*' || subject.front() == ' ')) {
    subject.erase(subject.begin());
  }
  subject = trim(subject);
  std::string rest = strip_edges(line.substr(colon + 1));
  if (subject.empty() || rest.empty()) return std::nullopt;

  if (auto all = resolve_referential(subject, authors); !all.empty()) {
    return std::make_pair(std::move(all), std::move(rest));
  }
  std::vector<std::size_t> matched;
  for (std::size_t i = 0; i < authors.size(); ++i) {
    const AuthorName& a = authors[i];
    const bool hit =
        std::find(a.initial_forms.begin(), a.initial_forms.end(), subject) !=
            a.initial_forms.end() ||
        std::find(a.aliases.begin(), a.aliases.end(), subject) != a.aliases.end();
    if (hit) matched.push_back(i);
  }
  if (matched.empty()) return std::nullopt;
  return std::make_pair(std::move(matched), std::move(rest));
}

bool detect_structured(std::string_view statement,
                       const std::vector<AuthorName>& authors) {
  std::istringstream in{std::string(statement)};
  std::string line;
  while (std::getline(in, line)) {
    auto split = split_structured_line(line, authors);
    if (split && split->first.size() == 1 &&
        resolve_referential(normalize_text(line.substr(0, line.find(':'))),
                            authors)
            .empty()) {
      return true;
    }
  }
  return false;
}

ParsedStatement parse_statement(const PaperRecord& paper,
                                const RoleLexicon& lexicon) {
  if (!paper.contribution_statement) {
    throw NoStatementError("paper " + paper.paper_id +
                           " has no contribution statement");
  }
  ParsedStatement out;
  out.structured = paper.statement_structured;
  out.assignment.roles.assign(paper.authors.size(), RoleSet{});

  auto record = [&](std::vector<ContributionTriple> triples) {
    for (ContributionTriple& t : triples) {
      t.roles = map_roles(t.phrase, lexicon);
      t.unmapped = t.roles.none();
      if (t.unmapped && std::find(out.unmapped.begin(), out.unmapped.end(),
                                  t.phrase) == out.unmapped.end()) {
        out.unmapped.push_back(t.phrase);
      }
      out.assignment.add(std::move(t));
    }
  };
  auto align_sentence = [&](const std::string& sentence) {
    ++out.sentences;
    SentenceAlignment a = align_contributions(sentence, paper.authors);
    out.ambiguities.insert(out.ambiguities.end(), a.ambiguities.begin(),
                           a.ambiguities.end());
    if (!a.triples.empty()) {
      ++out.aligned_sentences;
      record(std::move(a.triples));
    } else if (!a.ambiguities.empty()) {
      ++out.ambiguous_sentences;
    } else {
      ++out.residue_sentences;
      out.residue.push_back(sentence);
    }
  };

  const std::string& statement = *paper.contribution_statement;
  if (!paper.statement_structured) {
    for (const std::string& s : segment_statement(statement)) align_sentence(s);
    return out;
  }

  std::istringstream in(statement);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto split = split_structured_line(line, paper.authors);
    if (!split) {
      for (const std::string& s : segment_statement(line)) align_sentence(s);
      continue;
    }
    ++out.sentences;
    const std::string subject = trim(line.substr(0, line.find(':')));
    const bool referential = !resolve_referential(subject, paper.authors).empty();
    if (split->first.size() > 1 && !referential) {
      ++out.ambiguous_sentences;
      out.ambiguities.push_back({normalize_text(line), subject, split->first});
      continue;
    }
    ++out.aligned_sentences;
    std::vector<ContributionTriple> triples;
    for (std::size_t a : split->first) triples.push_back({a, split->second, {}, false});
    record(std::move(triples));
  }
  return out;
}

}  // namespace contribscope
