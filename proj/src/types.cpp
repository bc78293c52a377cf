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

#include "contribscope/types.hpp"

#include "contribscope/text.hpp"

namespace contribscope {
namespace {

constexpr std::array<std::string_view, kNumTypes> kTypeNames = {
    "Theoretical", "Methodological", "Experimental", "Data-based", "Other"};

constexpr std::array<std::string_view, kNumRoles> kRoleNames = {
    "Conceptualization",     "DataCuration",         "FormalAnalysis",
    "FundingAcquisition",    "Investigation",        "Methodology",
    "ProjectAdministration", "Resources",            "Software",
    "Supervision",           "Validation",           "Visualization",
    "WritingOriginalDraft",  "WritingReviewEditing"};

// Lower-case letters and digits only, with the word "and" removed, so that
// "Writing - review & editing" and "WritingReviewEditing" compare equal.
std::string squash(std::string_view s) {
  std::string out;
  for (const std::string& tok : word_tokens(s)) {
    if (tok == "and") continue;
    out += tok;
  }
  return out;
}

}  // namespace

std::string_view to_string(ContributionType t) {
  return kTypeNames[type_index(t)];
}

std::string_view to_string(CreditRole r) { return kRoleNames[role_index(r)]; }

std::optional<ContributionType> parse_contribution_type(std::string_view s) {
  for (ContributionType t : kAllTypes) {
    if (s == to_string(t)) return t;
  }
  if (s == "DataBased") return ContributionType::DataBased;
  return std::nullopt;
}

std::optional<CreditRole> parse_credit_role(std::string_view s) {
  for (std::size_t i = 0; i < kNumRoles; ++i) {
    if (s == kRoleNames[i]) return role_at(i);
  }
  const std::string key = squash(s);
  if (key.empty()) return std::nullopt;
  for (std::size_t i = 0; i < kNumRoles; ++i) {
    if (key == squash(kRoleNames[i])) return role_at(i);
  }
  // Common long forms of the two writing roles.
  if (key == "writingoriginaldraftpreparation") {
    return CreditRole::WritingOriginalDraft;
  }
  if (key == "writingreviewediting" || key == "reviewediting") {
    return CreditRole::WritingReviewEditing;
  }
  return std::nullopt;
}

std::vector<std::string> role_names(const RoleSet& roles) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kNumRoles; ++i) {
    if (roles.test(i)) out.emplace_back(kRoleNames[i]);
  }
  return out;
}

std::vector<std::string> type_names(const TypeSet& types) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kNumTypes; ++i) {
    if (types.test(i)) out.emplace_back(kTypeNames[i]);
  }
  return out;
}

}  // namespace contribscope
