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

#ifndef CONTRIBSCOPE_TYPES_HPP_
#define CONTRIBSCOPE_TYPES_HPP_

#include <array>
#include <bitset>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace contribscope {

/// The five contribution types, in canonical order. The order is used for
/// every 5-vector in the library and for all tie-breaks.
enum class ContributionType : int {
  Theoretical = 0,
  Methodological = 1,
  Experimental = 2,
  DataBased = 3,
  Other = 4,
};

inline constexpr std::size_t kNumTypes = 5;

inline constexpr std::array<ContributionType, kNumTypes> kAllTypes = {
    ContributionType::Theoretical, ContributionType::Methodological,
    ContributionType::Experimental, ContributionType::DataBased,
    ContributionType::Other};

/// The 14 CRediT roles. Enumerator values are the conventional role numbers
/// 1..14; use role_index() for a zero-based position.
enum class CreditRole : int {
  Conceptualization = 1,
  DataCuration = 2,
  FormalAnalysis = 3,
  FundingAcquisition = 4,
  Investigation = 5,
  Methodology = 6,
  ProjectAdministration = 7,
  Resources = 8,
  Software = 9,
  Supervision = 10,
  Validation = 11,
  Visualization = 12,
  WritingOriginalDraft = 13,
  WritingReviewEditing = 14,
};

inline constexpr std::size_t kNumRoles = 14;

constexpr std::size_t type_index(ContributionType t) {
  return static_cast<std::size_t>(t);
}
constexpr std::size_t role_index(CreditRole r) {
  return static_cast<std::size_t>(r) - 1;
}
constexpr CreditRole role_at(std::size_t index) {
  return static_cast<CreditRole>(static_cast<int>(index) + 1);
}
constexpr int role_number(CreditRole r) { return static_cast<int>(r); }

using RoleSet = std::bitset<kNumRoles>;
using TypeSet = std::bitset<kNumTypes>;

inline RoleSet role_set(std::initializer_list<CreditRole> roles) {
  RoleSet s;
  for (CreditRole r : roles) s.set(role_index(r));
  return s;
}
inline TypeSet type_set(std::initializer_list<ContributionType> types) {
  TypeSet s;
  for (ContributionType t : types) s.set(type_index(t));
  return s;
}

/// Dense vectors over types and roles. Templated on scalar so the same code
/// runs on double, long double or integer counts.
template <typename Scalar>
using TypeVec = Eigen::Matrix<Scalar, static_cast<int>(kNumTypes), 1>;
template <typename Scalar>
using RoleVec = Eigen::Matrix<Scalar, static_cast<int>(kNumRoles), 1>;

using TypeVector = TypeVec<double>;
using RoleVector = RoleVec<double>;
using TypeCounts = TypeVec<long long>;

// Wire names. "Data-based" is the external spelling of DataBased.
std::string_view to_string(ContributionType t);
std::string_view to_string(CreditRole r);

/// Accepts the wire spelling and the enumerator spelling ("DataBased").
std::optional<ContributionType> parse_contribution_type(std::string_view s);

/// Accepts the canonical enumerator spelling ("WritingOriginalDraft") and
/// loose variants that differ only in case, spaces, hyphens, ampersands or
/// the word "and" ("Writing - review & editing").
std::optional<CreditRole> parse_credit_role(std::string_view s);

std::vector<std::string> role_names(const RoleSet& roles);
std::vector<std::string> type_names(const TypeSet& types);

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace contribscope

#endif  // CONTRIBSCOPE_TYPES_HPP_
