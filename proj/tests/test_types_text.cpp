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

#include "contribscope/text.hpp"
#include "contribscope/types.hpp"

namespace cs = contribscope;
using cs::ContributionType;
using cs::CreditRole;

TEST_CASE("five types in canonical order") {
  REQUIRE(cs::kAllTypes.size() == 5);
  CHECK(cs::to_string(cs::kAllTypes[0]) == "Theoretical");
  CHECK(cs::to_string(cs::kAllTypes[1]) == "Methodological");
  CHECK(cs::to_string(cs::kAllTypes[2]) == "Experimental");
  CHECK(cs::to_string(cs::kAllTypes[3]) == "Data-based");
  CHECK(cs::to_string(cs::kAllTypes[4]) == "Other");
}

TEST_CASE("type names parse in wire and enumerator spelling") {
  CHECK(cs::parse_contribution_type("Data-based") == ContributionType::DataBased);
  CHECK(cs::parse_contribution_type("DataBased") == ContributionType::DataBased);
  CHECK(cs::parse_contribution_type("Theoretical") == ContributionType::Theoretical);
  CHECK_FALSE(cs::parse_contribution_type("Banana").has_value());
  for (ContributionType t : cs::kAllTypes) {
    CHECK(cs::parse_contribution_type(cs::to_string(t)) == t);
  }
}

TEST_CASE("fourteen roles numbered one to fourteen") {
  CHECK(cs::role_number(CreditRole::Conceptualization) == 1);
  CHECK(cs::role_number(CreditRole::Investigation) == 5);
  CHECK(cs::role_number(CreditRole::Software) == 9);
  CHECK(cs::role_number(CreditRole::WritingReviewEditing) == 14);
  for (std::size_t l = 0; l < cs::kNumRoles; ++l) {
    const CreditRole r = cs::role_at(l);
    CHECK(cs::role_index(r) == l);
    CHECK(cs::parse_credit_role(cs::to_string(r)) == r);
  }
}

TEST_CASE("role names parse loosely") {
  CHECK(cs::parse_credit_role("Writing - review & editing") ==
        CreditRole::WritingReviewEditing);
  CHECK(cs::parse_credit_role("writing – original draft") == CreditRole::WritingOriginalDraft);
  CHECK(cs::parse_credit_role("Formal analysis") == CreditRole::FormalAnalysis);
  CHECK(cs::parse_credit_role("data curation") == CreditRole::DataCuration);
  CHECK_FALSE(cs::parse_credit_role("Cooking").has_value());
}

TEST_CASE("normalize_text collapses whitespace and composes") {
  CHECK(cs::normalize_text("  a \t b\n\nc  ") == "a b c");
  // "e" + combining acute composes to U+00E9.
  CHECK(cs::normalize_text("caf\x65\xcc\x81") == "caf\xc3\xa9");
  CHECK(cs::normalize_text("") == "");
}

TEST_CASE("word_tokens lower-cases and splits on punctuation") {
  const auto t = cs::word_tokens("Consistent with the Findings-of [target cited reference].");
  const std::vector<std::string> expected = {"consistent", "with", "the", "findings",
                                             "of", "target", "cited", "reference"};
  CHECK(t == expected);
}

TEST_CASE("word_tokens treats Unicode punctuation as a separator") {
  const std::vector<std::string> expected = {"writing", "original", "draft"};
  CHECK(cs::word_tokens("Writing \xe2\x80\x93 original draft") == expected);
  CHECK(cs::word_tokens("\xe2\x80\x9cwriting\xe2\x80\x9d original\xe2\x80\x94" "draft") == expected);
  const std::vector<std::string> names = {"mar\xc3\xad" "a", "l\xc3\xb3pez"};
  CHECK(cs::word_tokens("Mar\xc3\xad" "a L\xc3\xb3pez") == names);
}

TEST_CASE("TermPattern matching") {
  const auto tokens = cs::word_tokens("we designed the whole study carefully");
  CHECK(cs::TermPattern("designed the").matches(tokens));
  CHECK_FALSE(cs::TermPattern("designed study").matches(tokens));
  CHECK(cs::TermPattern("design* * whole").matches(tokens));
  CHECK(cs::TermPattern("designed * study").matches(cs::word_tokens("designed study")));
  CHECK(cs::TermPattern("designed * study").matches(cs::word_tokens("designed the study")));
  CHECK(cs::TermPattern("designed * study").matches(cs::word_tokens("designed the big study")));
  CHECK_FALSE(cs::TermPattern("designed * study")
                  .matches(cs::word_tokens("designed the very big study")));
  CHECK(cs::TermPattern("review & editing").matches(cs::word_tokens("Review and editing")) ==
        false);
  CHECK(cs::TermPattern("review & editing").matches(cs::word_tokens("review, editing")));
  CHECK(cs::TermPattern("analy*").matches(cs::word_tokens("Analysed the data")));
}

TEST_CASE("sha256 of known vectors") {
  CHECK(cs::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(cs::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("count_occurrences counts non-overlapping hits") {
  CHECK(cs::count_occurrences("aaaa", "aa") == 2);
  CHECK(cs::count_occurrences("abc", "") == 0);
  CHECK(cs::count_occurrences("x [p] y [p]", "[p]") == 2);
}
