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

#include "contribscope/text.hpp"

#include <openssl/evp.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>

#include <fmt/format.h>

#include "contribscope/types.hpp"

namespace contribscope {
namespace {

// Longest run of text tokens a lone '*' may skip.
constexpr std::size_t kMaxGap = 2;

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

std::string nfc(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString dst = normalizer->normalize(src, status);
  if (U_FAILURE(status)) return std::string(text);
  std::string out;
  dst.toUTF8String(out);
  return out;
}

}  // namespace

std::string normalize_text(std::string_view text) {
  const std::string composed = nfc(text);
  std::string out;
  out.reserve(composed.size());
  bool pending_space = false;
  for (char c : composed) {
    if (is_space(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

std::size_t count_occurrences(std::string_view haystack,
                              std::string_view needle) {
  if (needle.empty()) return 0;
  std::size_t n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t begin = i;
    UChar32 cp = 0;
    U8_NEXT(bytes, i, length, cp);
    if (cp < 0x80 && cp >= 0) {
      const char c = static_cast<char>(cp);
      if (is_ascii_alnum(c)) {
        current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
        continue;
      }
    } else if (cp >= 0 && !u_ispunct(cp) && !u_isUWhiteSpace(cp)) {
      // Letters, marks and other symbols outside ASCII stay in the word.
      current.append(text.substr(static_cast<std::size_t>(begin),
                                 static_cast<std::size_t>(i - begin)));
      continue;
    }
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TermPattern::TermPattern(std::string_view pattern) : source_(trim(pattern)) {
  std::string lowered = to_lower_ascii(source_);
  std::size_t i = 0;
  while (i < lowered.size()) {
    if (lowered[i] == '*') {
      tokens_.push_back({"", false, true});
      ++i;
      continue;
    }
    if (!is_ascii_alnum(lowered[i]) &&
        static_cast<unsigned char>(lowered[i]) < 0x80) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < lowered.size() &&
           (is_ascii_alnum(lowered[j]) ||
            static_cast<unsigned char>(lowered[j]) >= 0x80)) {
      ++j;
    }
    Token tok{lowered.substr(i, j - i), false, false};
    if (j < lowered.size() && lowered[j] == '*') {
      tok.prefix = true;
      ++j;
    }
    tokens_.push_back(std::move(tok));
    i = j;
  }
}

bool TermPattern::token_matches(const Token& p, const std::string& t) const {
  if (p.prefix) return t.compare(0, p.text.size(), p.text) == 0;
  return t == p.text;
}

bool TermPattern::matches_at(const std::vector<std::string>& text,
                             std::size_t ti, std::size_t pi) const {
  if (pi == tokens_.size()) return true;
  const Token& p = tokens_[pi];
  if (p.wildcard) {
    for (std::size_t skip = 0; skip <= kMaxGap && ti + skip <= text.size(); ++skip) {
      if (matches_at(text, ti + skip, pi + 1)) return true;
    }
    return false;
  }
  return ti < text.size() && token_matches(p, text[ti]) &&
         matches_at(text, ti + 1, pi + 1);
}

bool TermPattern::matches(const std::vector<std::string>& text_tokens) const {
  if (tokens_.empty()) return false;
  for (std::size_t start = 0; start < text_tokens.size(); ++start) {
    // A pattern never starts its match on a gap.
    if (!tokens_.front().wildcard &&
        !token_matches(tokens_.front(), text_tokens[start])) {
      continue;
    }
    if (matches_at(text_tokens, start, 0)) return true;
  }
  return false;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace contribscope
