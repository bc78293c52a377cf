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

// Per-paper input and output distributions over contribution types.
//
// Input side: every credited author spreads one unit of credit evenly over
// the roles they hold (fractional counting); role credit is then mapped to
// contribution types and divided by the author count. Output side: every
// labeled citation context counts once for its type (full counting).

#ifndef CONTRIBSCOPE_SCORING_HPP_
#define CONTRIBSCOPE_SCORING_HPP_

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "contribscope/corpus.hpp"
#include "contribscope/credit_parser.hpp"
#include "contribscope/types.hpp"

namespace contribscope {

/// Which roles feed each contribution type. The default is the standard
/// role-to-type table, where Investigation feeds both Experimental and
/// Data-based.
class EffortMapping {
 public:
  EffortMapping() = default;
  explicit EffortMapping(std::array<RoleSet, kNumTypes> roles_by_type);

  static const EffortMapping& standard();
  /// JSON object: type name -> array of role names. Types not present map to
  /// no roles. Throws ValidationError if a role is left unmapped.
  static EffortMapping from_json(const nlohmann::json& obj);
  static EffortMapping from_file(const std::filesystem::path& path);

  const RoleSet& roles_of(ContributionType t) const {
    return roles_by_type_[type_index(t)];
  }
  TypeSet types_of(CreditRole role) const;
  /// Number of types a role feeds.
  int multiplicity(CreditRole role) const {
    return static_cast<int>(types_of(role).count());
  }
  /// Throws ValidationError unless every role feeds at least one type.
  void validate() const;

  bool operator==(const EffortMapping&) const = default;

 private:
  std::array<RoleSet, kNumTypes> roles_by_type_{};
};

template <typename Scalar = double>
struct CreditScores {
  RoleVec<Scalar> credit = RoleVec<Scalar>::Zero();
  int n_authors = 0;
  int n_credited = 0;

  Scalar of(CreditRole r) const { return credit(static_cast<Eigen::Index>(role_index(r))); }
};
using CreditScoreTable = CreditScores<double>;

/// C_l = sum over authors holding role l of 1 / D_a, where D_a is the number
/// of roles author a holds. Authors with no role contribute nothing.
template <typename Scalar = double>
CreditScores<Scalar> role_credit_scores(const std::vector<RoleSet>& author_roles,
                                        int n_authors) {
  if (static_cast<int>(author_roles.size()) > n_authors) {
    throw std::invalid_argument("assignment names more authors than the paper has");
  }
  CreditScores<Scalar> out;
  out.n_authors = n_authors;
  for (const RoleSet& roles : author_roles) {
    const auto held = roles.count();
    if (held == 0) continue;
    ++out.n_credited;
    const Scalar share = Scalar(1) / static_cast<Scalar>(held);
    for (std::size_t l = 0; l < kNumRoles; ++l) {
      if (roles.test(l)) out.credit(static_cast<Eigen::Index>(l)) += share;
    }
  }
  return out;
}

inline CreditScoreTable role_credit_scores(const AuthorRoleAssignment& assignment,
                                           int n_authors) {
  return role_credit_scores<double>(assignment.roles, n_authors);
}

template <typename Scalar = double>
struct EffortDistributionT {
  TypeVec<Scalar> raw = TypeVec<Scalar>::Zero();
  /// raw / sum(raw); absent when raw is all zero.
  std::optional<TypeVec<Scalar>> renormalized;
  int n_authors = 0;

  Scalar sum() const { return raw.sum(); }
  bool defined() const { return renormalized.has_value(); }
};
using EffortDistribution = EffortDistributionT<double>;

/// P_i = sum over roles l feeding type i of C_l / n. Because a role may feed
/// several types, sum(P) can exceed one; the renormalized view divides it out.
template <typename Scalar = double>
EffortDistributionT<Scalar> input_effort_distribution(const CreditScores<Scalar>& scores,
                                                      const EffortMapping& mapping) {
  if (scores.n_authors <= 0) throw std::invalid_argument("paper has no authors");
  EffortDistributionT<Scalar> out;
  out.n_authors = scores.n_authors;
  for (ContributionType t : kAllTypes) {
    Scalar sum(0);
    const RoleSet& roles = mapping.roles_of(t);
    for (std::size_t l = 0; l < kNumRoles; ++l) {
      if (roles.test(l)) sum += scores.credit(static_cast<Eigen::Index>(l));
    }
    out.raw(static_cast<Eigen::Index>(type_index(t))) =
        sum / static_cast<Scalar>(scores.n_authors);
  }
  const Scalar total = out.raw.sum();
  if (total > Scalar(0)) out.renormalized = out.raw / total;
  return out;
}

/// entry_l = C_l / n.
template <typename Scalar = double>
RoleVec<Scalar> role_share_vector(const CreditScores<Scalar>& scores) {
  if (scores.n_authors <= 0) throw std::invalid_argument("paper has no authors");
  return scores.credit / static_cast<Scalar>(scores.n_authors);
}

struct OutputDistribution {
  TypeCounts counts = TypeCounts::Zero();
  long long total = 0;
  /// counts / total; absent when total is zero.
  std::optional<TypeVector> proportions;

  bool defined() const { return proportions.has_value(); }
};

OutputDistribution output_distribution(const TypeCounts& counts);

/// Throws std::invalid_argument if any context is unlabeled.
OutputDistribution output_distribution(std::span<const CitationContext> contexts);

TypeSet contribution_types_for_role(CreditRole role, const EffortMapping& mapping);

/// One line of the scores dump. Either side may be missing.
struct PaperScores {
  std::string paper_id;
  int n_authors = 0;
  std::vector<std::string> disciplines;
  /// Roles per author, in author order; absent without a parsed statement.
  std::optional<std::vector<RoleSet>> author_roles;
  std::optional<CreditScoreTable> credit;
  std::optional<EffortDistribution> effort;
  OutputDistribution output;
  std::size_t unlabeled_contexts = 0;
  std::vector<std::string> flags;
};

/// `{"paper_id":..., "author_roles":[[...]], "credit":{...}, "effort_raw":[...], "effort_renorm":[...],
///   "output_counts":[...], "output_props":[...], ...}`; vectors in canonical
/// type order, absent sides as null, doubles at full precision.
nlohmann::json to_json(const PaperScores& scores);
PaperScores paper_scores_from_json(const nlohmann::json& obj);

}  // namespace contribscope

#endif  // CONTRIBSCOPE_SCORING_HPP_
