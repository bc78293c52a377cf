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

#include "contribscope/analytics.hpp"

#include <limits>

namespace contribscope {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Absorbs the rounding in differences of proportions such as 0.35 - 0.20,
// so that a gap equal to the threshold on paper is treated as equal.
constexpr double kGapTolerance = 1e-12;

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

bool is_constant(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return (v.array() == v(0)).all();
}

Eigen::Index type_count(int types) {
  if (types != 4 && types != 5) {
    throw std::invalid_argument("type count must be 4 or 5");
  }
  return types;
}

bool has_both_sides(const PaperScores& p) {
  return p.effort && p.effort->renormalized && p.output.proportions;
}

std::optional<TypeVector> group_vector_of(const PaperScores& p, GroupBy g) {
  if (g == GroupBy::DominantInput) {
    if (p.effort && p.effort->renormalized) return *p.effort->renormalized;
    return std::nullopt;
  }
  return p.output.proportions;
}

std::optional<Eigen::VectorXd> profile_of(const PaperScores& p, ProfileOf what) {
  const bool input_defined = p.effort && p.effort->renormalized;
  switch (what) {
    case ProfileOf::Output5:
      if (p.output.proportions) return Eigen::VectorXd(*p.output.proportions);
      return std::nullopt;
    case ProfileOf::Input5:
      if (input_defined) return Eigen::VectorXd(*p.effort->renormalized);
      return std::nullopt;
    case ProfileOf::Roles14:
      if (input_defined && p.credit) return Eigen::VectorXd(role_share_vector(*p.credit));
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("incomplete beta: shape parameters must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("incomplete beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student t: df must be positive");
  if (std::isnan(t)) return kNaN;
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(regularized_incomplete_beta(0.5 * df, 0.5, x), 0.0, 1.0);
}

std::string_view to_string(CorrelationMethod m) {
  switch (m) {
    case CorrelationMethod::Single:
      return "single";
    case CorrelationMethod::Pooled:
      return "pooled";
    case CorrelationMethod::PerPaperMean:
      return "per_paper_mean";
  }
  return "?";
}

namespace detail {

CorrelationResult pearson_impl(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: samples differ in length");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least two points");
  CorrelationResult out;
  out.n = static_cast<std::size_t>(x.size());
  if (is_constant(x) || is_constant(y)) return out;

  const Eigen::VectorXd dx = x.array() - x.mean();
  const Eigen::VectorXd dy = y.array() - y.mean();
  const double sxx = dx.squaredNorm();
  const double syy = dy.squaredNorm();
  if (!(sxx > 0.0) || !(syy > 0.0)) return out;
  const double r = std::clamp(dx.dot(dy) / std::sqrt(sxx * syy), -1.0, 1.0);
  out.r = r;
  if (out.n >= 4) {
    const double df = static_cast<double>(out.n - 2);
    // |t| = |r| sqrt(df / (1 - r^2)), so df / (df + t^2) = 1 - r^2.
    const double one_minus_r2 = std::max(0.0, (1.0 - r) * (1.0 + r));
    out.p = one_minus_r2 == 0.0
                ? 0.0
                : std::clamp(regularized_incomplete_beta(0.5 * df, 0.5, one_minus_r2),
                             0.0, 1.0);
  }
  return out;
}

}  // namespace detail

CorrelationResult pooled_correlation(std::span<const PaperScores> papers,
                                     const CorrelationOptions& options) {
  const Eigen::Index k = type_count(options.types);
  std::vector<double> xs;
  std::vector<double> ys;
  for (const PaperScores& p : papers) {
    if (!has_both_sides(p)) continue;
    for (Eigen::Index i = 0; i < k; ++i) {
      xs.push_back((*p.effort->renormalized)(i));
      ys.push_back((*p.output.proportions)(i));
    }
  }
  if (xs.empty()) {
    throw std::invalid_argument("pooled correlation: no paper has both sides defined");
  }
  CorrelationResult out = pearson(std::span<const double>(xs), std::span<const double>(ys));
  out.method = CorrelationMethod::Pooled;
  return out;
}

PerPaperCorrelation per_paper_correlation(std::span<const PaperScores> papers,
                                          const CorrelationOptions& options) {
  const Eigen::Index k = type_count(options.types);
  PerPaperCorrelation out;
  std::vector<double> rs;
  for (const PaperScores& p : papers) {
    if (!has_both_sides(p)) continue;
    const CorrelationResult one =
        pearson(p.effort->renormalized->head(k), p.output.proportions->head(k));
    out.per_paper.emplace_back(p.paper_id, one.r);
    if (one.r) {
      rs.push_back(*one.r);
    } else {
      ++out.excluded;
    }
  }
  if (rs.empty()) {
    throw std::invalid_argument("per-paper correlation: no paper yields a defined r");
  }
  Eigen::Map<const Eigen::VectorXd> r(rs.data(), static_cast<Eigen::Index>(rs.size()));
  out.summary.method = CorrelationMethod::PerPaperMean;
  out.summary.n = rs.size();
  out.summary.r = r.mean();
  if (rs.size() >= 4 && !is_constant(r)) {
    const double m = static_cast<double>(rs.size());
    const double sd = std::sqrt((r.array() - r.mean()).square().sum() / (m - 1.0));
    out.summary.p = student_t_two_tailed(r.mean() / (sd / std::sqrt(m)), m - 1.0);
  }
  return out;
}

DominantType dominant_type_detail(const TypeVector& dist) {
  if (!dist.allFinite() || !(dist.sum() > 0.0)) {
    throw std::invalid_argument("dominant type of an undefined distribution");
  }
  Eigen::Index best = 0;
  dist.maxCoeff(&best);
  DominantType out{kAllTypes[static_cast<std::size_t>(best)], false};
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    if (i != best && dist(i) == dist(best)) out.tied = true;
  }
  return out;
}

TypeSet output_cotypes(const TypeVector& dist, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("co-type threshold must lie in (0, 1)");
  }
  const DominantType dom = dominant_type_detail(dist);
  const double top = dist(static_cast<Eigen::Index>(type_index(dom.type)));
  TypeSet out;
  for (std::size_t t = 0; t < kNumTypes; ++t) {
    const double gap = top - dist(static_cast<Eigen::Index>(t));
    if (t == type_index(dom.type) || gap < threshold - kGapTolerance) out.set(t);
  }
  return out;
}

TypeSet author_effort_types(const RoleSet& roles, const EffortMapping& mapping) {
  TypeSet out;
  for (std::size_t l = 0; l < kNumRoles; ++l) {
    if (roles.test(l)) out |= contribution_types_for_role(role_at(l), mapping);
  }
  return out;
}

std::string_view to_string(Perspective p) {
  return p == Perspective::Input ? "input" : "output";
}

std::string_view to_string(NormDivisor d) { return d == NormDivisor::Cosine ? "cosine" : "min"; }

std::optional<NormDivisor> parse_norm_divisor(std::string_view s) {
  if (s == "cosine") return NormDivisor::Cosine;
  if (s == "min") return NormDivisor::Min;
  return std::nullopt;
}

std::vector<ContributionType> analytic_types(int k) {
  type_count(k);
  return {kAllTypes.begin(), kAllTypes.begin() + k};
}

CooccurrenceMatrix::CooccurrenceMatrix(std::vector<ContributionType> t, Perspective p)
    : types(std::move(t)), perspective(p) {
  const auto k = static_cast<Eigen::Index>(types.size());
  counts = CountMatrix::Zero(k, k);
}

bool CooccurrenceMatrix::add(const TypeSet& set) {
  std::vector<Eigen::Index> present;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (set.test(type_index(types[i]))) present.push_back(static_cast<Eigen::Index>(i));
  }
  if (present.size() < 2) return false;
  for (std::size_t a = 0; a < present.size(); ++a) {
    ++counts(present[a], present[a]);
    for (std::size_t b = a + 1; b < present.size(); ++b) {
      ++counts(present[a], present[b]);
      ++counts(present[b], present[a]);
    }
  }
  ++units;
  return true;
}

CooccurrenceMatrix input_cooccurrence(std::span<const PaperAssignments> papers,
                                      const EffortMapping& mapping, int k) {
  CooccurrenceMatrix m(analytic_types(k), Perspective::Input);
  for (const PaperAssignments& authors : papers) {
    for (const RoleSet& roles : authors) m.add(author_effort_types(roles, mapping));
  }
  return m;
}

CooccurrenceMatrix output_cooccurrence(std::span<const TypeVector> output_props,
                                       double threshold, int k) {
  CooccurrenceMatrix m(analytic_types(k), Perspective::Output);
  for (const TypeVector& props : output_props) m.add(output_cotypes(props, threshold));
  return m;
}

NormalizedMatrix normalize_diagonal(const CooccurrenceMatrix& m, NormDivisor divisor) {
  const Eigen::Index k = m.counts.rows();
  NormalizedMatrix out{m.types, Eigen::MatrixXd::Constant(k, k, kNaN),
                       BoolMatrix::Constant(k, k, false)};
  const Eigen::VectorXd diag = m.counts.diagonal().cast<double>();
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!(diag(i) > 0.0 && diag(j) > 0.0)) continue;
      const double denom = divisor == NormDivisor::Cosine ? std::sqrt(diag(i) * diag(j))
                                                          : std::min(diag(i), diag(j));
      out.values(i, j) = i == j ? 1.0 : static_cast<double>(m.counts(i, j)) / denom;
      out.defined(i, j) = true;
    }
  }
  return out;
}

Share multi_type_share_input(std::span<const PaperAssignments> papers,
                             const EffortMapping& mapping, int k) {
  const std::vector<ContributionType> types = analytic_types(k);
  TypeSet analysed;
  for (ContributionType t : types) analysed.set(type_index(t));
  Share out;
  for (const PaperAssignments& authors : papers) {
    ++out.eligible;
    const bool multi = std::any_of(authors.begin(), authors.end(), [&](const RoleSet& r) {
      return (author_effort_types(r, mapping) & analysed).count() >= 2;
    });
    if (multi) ++out.hits;
  }
  return out;
}

Share multi_type_share_output(std::span<const TypeVector> output_props, double threshold,
                              int k) {
  const std::vector<ContributionType> types = analytic_types(k);
  TypeSet analysed;
  for (ContributionType t : types) analysed.set(type_index(t));
  Share out;
  for (const TypeVector& props : output_props) {
    ++out.eligible;
    if ((output_cotypes(props, threshold) & analysed).count() >= 2) ++out.hits;
  }
  return out;
}

std::string_view to_string(GroupBy g) {
  return g == GroupBy::DominantInput ? "dominant_input" : "dominant_output";
}

std::string_view to_string(ProfileOf p) {
  switch (p) {
    case ProfileOf::Output5:
      return "output_5";
    case ProfileOf::Input5:
      return "input_5";
    case ProfileOf::Roles14:
      return "roles_14";
  }
  return "?";
}

GroupProfile normalized_group_profile(std::span<const ProfileSample> samples,
                                      GroupBy group_by, ProfileOf profile_of) {
  if (samples.empty()) throw std::invalid_argument("group profile of an empty corpus");
  const Eigen::Index len = samples.front().profile.size();
  GroupProfile out;
  out.group_by = group_by;
  out.profile_of = profile_of;
  out.baseline = Eigen::VectorXd::Zero(len);
  std::map<ContributionType, Eigen::VectorXd> sums;
  for (const ProfileSample& s : samples) {
    if (s.profile.size() != len) {
      throw std::invalid_argument("group profile: profiles differ in length");
    }
    const DominantType dom = dominant_type_detail(s.group_vector);
    out.baseline += s.profile;
    ++out.eligible;
    if (dom.tied) ++out.ties;
    if (dom.type == ContributionType::Other) {
      ++out.excluded_other;
      continue;
    }
    auto [it, inserted] = sums.try_emplace(dom.type, Eigen::VectorXd::Zero(len));
    it->second += s.profile;
    ++out.group_sizes[dom.type];
  }
  out.baseline /= static_cast<double>(out.eligible);
  for (const auto& [type, sum] : sums) {
    const Eigen::VectorXd mean = sum / static_cast<double>(out.group_sizes[type]);
    Eigen::VectorXd values(len);
    Eigen::Array<bool, Eigen::Dynamic, 1> defined(len);
    for (Eigen::Index j = 0; j < len; ++j) {
      defined(j) = out.baseline(j) > 0.0;
      values(j) = defined(j) ? mean(j) / out.baseline(j) : kNaN;
    }
    out.normalized.emplace(type, std::move(values));
    out.defined.emplace(type, std::move(defined));
  }
  return out;
}

GroupProfile normalized_group_profile(std::span<const PaperScores> papers,
                                      GroupBy group_by, ProfileOf what) {
  std::vector<ProfileSample> samples;
  for (const PaperScores& p : papers) {
    auto group = group_vector_of(p, group_by);
    auto profile = profile_of(p, what);
    if (!group || !profile) continue;
    samples.push_back({*group, std::move(*profile)});
  }
  return normalized_group_profile(std::span<const ProfileSample>(samples), group_by, what);
}

std::map<std::string, OutputDistribution> discipline_breakdown(
    std::span<const PaperScores> papers) {
  std::map<std::string, TypeCounts> counts;
  for (const PaperScores& p : papers) {
    for (const std::string& tag : p.disciplines) {
      auto [it, inserted] = counts.try_emplace(tag, TypeCounts::Zero());
      it->second += p.output.counts;
    }
  }
  std::map<std::string, OutputDistribution> out;
  for (const auto& [tag, c] : counts) out.emplace(tag, output_distribution(c));
  return out;
}

OutputDistribution corpus_output_distribution(std::span<const PaperScores> papers) {
  TypeCounts counts = TypeCounts::Zero();
  for (const PaperScores& p : papers) counts += p.output.counts;
  return output_distribution(counts);
}

InputTotals corpus_input_totals(std::span<const PaperScores> papers) {
  InputTotals out;
  for (const PaperScores& p : papers) {
    if (!p.effort || !p.effort->defined()) continue;
    out.sum += p.effort->raw;
    ++out.papers;
  }
  if (out.sum.sum() > 0.0) out.proportions = out.sum / out.sum.sum();
  return out;
}

}  // namespace contribscope
