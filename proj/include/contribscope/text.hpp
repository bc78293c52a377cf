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

// Text utilities shared by the corpus loader, the context classifier and the
// contribution-statement parser.

#ifndef CONTRIBSCOPE_TEXT_HPP_
#define CONTRIBSCOPE_TEXT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace contribscope {

/// Unicode NFC, whitespace runs collapsed to a single space, trimmed.
std::string normalize_text(std::string_view text);

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
bool is_ascii_alnum(char c);

std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

/// Lower-cased word tokens: maximal runs of ASCII letters/digits or non-ASCII
/// code points other than punctuation and white space. Punctuation (including
/// Unicode dashes and quotes) separates tokens and is dropped. Malformed
/// UTF-8 bytes act as separators.
std::vector<std::string> word_tokens(std::string_view text);

/// A lexicon pattern compiled to a token sequence. Each pattern token matches
/// one text token; a trailing '*' makes it a prefix match and a lone '*' is
/// an optional gap of zero to two tokens. Matching is case-insensitive and
/// ignores punctuation, so "review & editing" matches "review editing".
class TermPattern {
 public:
  explicit TermPattern(std::string_view pattern);

  const std::string& source() const { return source_; }
  bool empty() const { return tokens_.empty(); }

  bool matches(const std::vector<std::string>& text_tokens) const;

 private:
  struct Token {
    std::string text;
    bool prefix = false;
    bool wildcard = false;
  };
  bool token_matches(const Token& p, const std::string& t) const;
  bool matches_at(const std::vector<std::string>& text, std::size_t ti,
                  std::size_t pi) const;

  std::string source_;
  std::vector<Token> tokens_;
};

/// Lower-case hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace contribscope

#endif  // CONTRIBSCOPE_TEXT_HPP_
