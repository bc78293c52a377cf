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

// Corpus-level statistics over per-paper scores: correlations between the
// input and output sides, dominant-type grouping, co-type detection and
// co-occurrence matrices.

#ifndef CONTRIBSCOPE_ANALYTICS_HPP_
#define CONTRIBSCOPE_ANALYTICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "contribscope/scoring.hpp"
#include "contribscope/types.hpp"

namespace contribscope {

// ---------------------------------------------------------------------------
// Special functions

/// I_x(a, b) by Lentz's continued fraction. Requires a, b > 0, x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

// ---------------------------------------------------------------------------
// Correlation

enum class CorrelationMethod { Single, Pooled, PerPaperMean };

std::string_view to_string(CorrelationMethod m);

struct CorrelationResult {
  /// Absent when either sample has zero variance.
  std::optional<double> r;
  /// Two-tailed; absent when r is absent or n < 4.
  std::optional<double> p;
  std::size_t n = 0;
  CorrelationMethod method = CorrelationMethod::Single;

  bool defined() const { return r.has_value(); }
};

namespace detail {
CorrelationResult pearson_impl(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y);
}  // namespace detail

/// Product-moment correlation with a Student-t p-value on n - 2 degrees of
/// freedom. Throws std::invalid_argument if the lengths differ or n < 2.
template <typename DerivedX, typename DerivedY>
CorrelationResult pearson(const Eigen::MatrixBase<DerivedX>& x,
                          const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("pearson: samples differ in length");
  }
  const Eigen::VectorXd xv = x.derived().template cast<double>().reshaped();
  const Eigen::VectorXd yv = y.derived().template cast<double>().reshaped();
  return detail::pearson_impl(xv, yv);
}

inline CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("pearson: samples differ in length");
  }
  Eigen::Map<const Eigen::VectorXd> xm(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
  return detail::pearson_impl(xm, ym);
}

struct CorrelationOptions {
  /// 5 uses every type; 4 drops Other.
  int types = 5;
};

/// Stacks (renormalized effort, output proportion) pairs of every paper
/// that has both sides defined into one sample. Throws
/// std::invalid_argument when no paper is eligible.
CorrelationResult pooled_correlation(std::span<const PaperScores> papers,
                                     const CorrelationOptions& options = {});

struct PerPaperCorrelation {
  /// r is the mean of the defined per-paper values; p is a one-sample
  /// t-test of those values against zero, under the same n >= 4 and
  /// nonzero-variance conditions as pearson().
  CorrelationResult summary;
  /// One entry per eligible paper, in input order.
  std::vector<std::pair<std::string, std::optional<double>>> per_paper;
  /// Eligible papers whose r is undefined.
  std::size_t excluded = 0;
};

/// Throws std::invalid_argument when no paper yields a defined r.
PerPaperCorrelation per_paper_correlation(std::span<const PaperScores> papers,
                                          const CorrelationOptions& options = {});

// ---------------------------------------------------------------------------
// Dominant types and co-types

struct DominantType {
  ContributionType type = ContributionType::Theoretical;
  /// Another type shares the maximum.
  bool tied = false;
};

/// Argmax; ties go to the earlier type. Throws std::invalid_argument if the
/// vector does not sum to a positive value.
DominantType dominant_type_detail(const TypeVector& dist);

inline ContributionType dominant_type(const TypeVector& dist) {
  return dominant_type_detail(dist).type;
}

inline constexpr double kDefaultCotypeThreshold = 0.15;

/// The dominant type plus every type whose proportion trails it by strictly
/// less than `threshold`.
TypeSet output_cotypes(const TypeVector& dist, double threshold = kDefaultCotypeThreshold);

TypeSet author_effort_types(const RoleSet& roles, const EffortMapping& mapping);

// ---------------------------------------------------------------------------
// Co-occurrence

enum class Perspective { Input, Output };
enum class NormDivisor { Cosine, Min };

std::string_view to_string(Perspective p);
std::string_view to_string(NormDivisor d);
std::optional<NormDivisor> parse_norm_divisor(std::string_view s);

/// The analysed type list: k = 4 drops Other, k = 5 keeps every type.
/// Throws std::invalid_argument for any other k.
std::vector<ContributionType> analytic_types(int k);

using CountMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct CooccurrenceMatrix {
  std::vector<ContributionType> types;
  CountMatrix counts;
  Perspective perspective = Perspective::Input;
  /// Units (authors or papers) that contributed to the matrix.
  std::size_t units = 0;

  explicit CooccurrenceMatrix(std::vector<ContributionType> t = analytic_types(4),
                              Perspective p = Perspective::Input);

  /// Adds one unit for `set` restricted to the analysed types, provided at
  /// least two of them remain. Returns whether anything was added.
  bool add(const TypeSet& set);
};

/// One entry per paper: the roles of each of its authors.
using PaperAssignments = std::vector<RoleSet>;

CooccurrenceMatrix input_cooccurrence(std::span<const PaperAssignments> papers,
                                      const EffortMapping& mapping, int k = 4);

CooccurrenceMatrix output_cooccurrence(std::span<const TypeVector> output_props,
                                       double threshold = kDefaultCotypeThreshold,
                                       int k = 4);

struct NormalizedMatrix {
  std::vector<ContributionType> types;
  /// NaN where undefined.
  Eigen::MatrixXd values;
  BoolMatrix defined;
};

/// Cosine: s_ij = M_ij / sqrt(M_ii M_jj). Min: s_ij = M_ij / min(M_ii, M_jj).
/// Entries are undefined unless both diagonals are positive.
NormalizedMatrix normalize_diagonal(const CooccurrenceMatrix& m,
                                    NormDivisor divisor = NormDivisor::Cosine);

// ---------------------------------------------------------------------------
// Multi-type share

struct Share {
  std::size_t hits = 0;
  std::size_t eligible = 0;

  std::optional<double> value() const {
    if (eligible == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(eligible);
  }
};

/// Papers with at least one author spanning two or more analysed types.
Share multi_type_share_input(std::span<const PaperAssignments> papers,
                             const EffortMapping& mapping, int k = 4);

/// Papers with two or more analysed co-types.
Share multi_type_share_output(std::span<const TypeVector> output_props,
                              double threshold = kDefaultCotypeThreshold, int k = 4);

// ---------------------------------------------------------------------------
// Group profiles

enum class GroupBy { DominantInput, DominantOutput };
enum class ProfileOf { Output5, Input5, Roles14 };

std::string_view to_string(GroupBy g);
std::string_view to_string(ProfileOf p);

struct ProfileSample {
  /// Distribution that picks the group; must sum to a positive value.
  TypeVector group_vector;
  Eigen::VectorXd profile;
};

struct GroupProfile {
  GroupBy group_by = GroupBy::DominantInput;
  ProfileOf profile_of = ProfileOf::Output5;
  /// Mean profile over every eligible paper.
  Eigen::VectorXd baseline;
  /// Group mean divided by the baseline; NaN where the baseline is zero.
  std::map<ContributionType, Eigen::VectorXd> normalized;
  std::map<ContributionType, Eigen::Array<bool, Eigen::Dynamic, 1>> defined;
  std::map<ContributionType, std::size_t> group_sizes;
  std::size_t eligible = 0;
  /// Papers whose dominant type is Other; they count toward the baseline
  /// but form no group.
  std::size_t excluded_other = 0;
  std::size_t ties = 0;
};

/// Throws std::invalid_argument when `samples` is empty or the profiles
/// differ in length.
GroupProfile normalized_group_profile(std::span<const ProfileSample> samples,
                                      GroupBy group_by, ProfileOf profile_of);

/// Builds samples from paper scores: papers lacking the grouping side or
/// the profile side are skipped.
GroupProfile normalized_group_profile(std::span<const PaperScores> papers,
                                      GroupBy group_by, ProfileOf profile_of);

// ---------------------------------------------------------------------------
// Totals

/// Keyed by discipline tag; a paper with several tags counts in each.
std::map<std::string, OutputDistribution> discipline_breakdown(
    std::span<const PaperScores> papers);

OutputDistribution corpus_output_distribution(std::span<const PaperScores> papers);

struct InputTotals {
  /// Sum of the raw effort vectors.
  TypeVector sum = TypeVector::Zero();
  /// sum / sum(sum); absent when nothing was summed.
  std::optional<TypeVector> proportions;
  std::size_t papers = 0;
};

InputTotals corpus_input_totals(std::span<const PaperScores> papers);

}  // namespace contribscope

#endif  // CONTRIBSCOPE_ANALYTICS_HPP_
