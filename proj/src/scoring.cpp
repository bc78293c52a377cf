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

#include "contribscope/scoring.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace contribscope {
namespace {

using nlohmann::json;
using R = CreditRole;

json vector_json(const TypeVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

TypeVector vector_from(const json& a) {
  if (!a.is_array() || a.size() != kNumTypes) {
    throw ValidationError("expected an array of 5 numbers");
  }
  TypeVector v;
  for (std::size_t i = 0; i < kNumTypes; ++i) {
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

}  // namespace

EffortMapping::EffortMapping(std::array<RoleSet, kNumTypes> roles_by_type)
    : roles_by_type_(roles_by_type) {}

const EffortMapping& EffortMapping::standard() {
  static const EffortMapping kStandard({
      role_set({R::Conceptualization, R::WritingOriginalDraft,
                R::WritingReviewEditing}),
      role_set({R::Methodology, R::Software}),
      role_set({R::FormalAnalysis, R::Investigation, R::Validation,
                R::Visualization}),
      role_set({R::DataCuration, R::Investigation, R::Resources}),
      role_set({R::FundingAcquisition, R::ProjectAdministration, R::Supervision}),
  });
  return kStandard;
}

EffortMapping EffortMapping::from_json(const json& obj) {
  if (!obj.is_object()) throw ValidationError("effort mapping must be a JSON object");
  std::array<RoleSet, kNumTypes> sets{};
  for (const auto& [key, roles] : obj.items()) {
    auto type = parse_contribution_type(key);
    if (!type) throw ValidationError("effort mapping: unknown type '" + key + "'");
    if (!roles.is_array()) {
      throw ValidationError("effort mapping: roles of '" + key + "' must be an array");
    }
    for (const json& r : roles) {
      auto role = r.is_string() ? parse_credit_role(r.get<std::string>()) : std::nullopt;
      if (!role) throw ValidationError("effort mapping: unknown role " + r.dump());
      sets[type_index(*type)].set(role_index(*role));
    }
  }
  EffortMapping m(sets);
  m.validate();
  return m;
}

EffortMapping EffortMapping::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read effort mapping: " + path.string());
  json obj = json::parse(in, nullptr, false);
  if (obj.is_discarded()) throw ValidationError("effort mapping is not valid JSON");
  return from_json(obj);
}

TypeSet EffortMapping::types_of(CreditRole role) const {
  TypeSet out;
  for (std::size_t t = 0; t < kNumTypes; ++t) {
    if (roles_by_type_[t].test(role_index(role))) out.set(t);
  }
  return out;
}

void EffortMapping::validate() const {
  for (std::size_t l = 0; l < kNumRoles; ++l) {
    if (types_of(role_at(l)).none()) {
      throw ValidationError("effort mapping leaves role " +
                            std::string(to_string(role_at(l))) + " unmapped");
    }
  }
}

OutputDistribution output_distribution(const TypeCounts& counts) {
  OutputDistribution out;
  out.counts = counts;
  out.total = counts.sum();
  if (out.total > 0) {
    out.proportions = counts.cast<double>() / static_cast<double>(out.total);
  }
  return out;
}

OutputDistribution output_distribution(std::span<const CitationContext> contexts) {
  TypeCounts counts = TypeCounts::Zero();
  for (const CitationContext& c : contexts) {
    if (!c.label) {
      throw std::invalid_argument("context " + c.context_id + " is unlabeled");
    }
    ++counts(static_cast<Eigen::Index>(type_index(*c.label)));
  }
  return output_distribution(counts);
}

TypeSet contribution_types_for_role(CreditRole role, const EffortMapping& mapping) {
  return mapping.types_of(role);
}

json to_json(const PaperScores& s) {
  json obj = json::object();
  obj["paper_id"] = s.paper_id;
  obj["n_authors"] = s.n_authors;
  obj["disciplines"] = s.disciplines;
  if (s.author_roles) {
    json authors = json::array();
    for (const RoleSet& roles : *s.author_roles) {
      json names = json::array();
      for (std::size_t l = 0; l < kNumRoles; ++l) {
        if (roles.test(l)) names.push_back(std::string(to_string(role_at(l))));
      }
      authors.push_back(std::move(names));
    }
    obj["author_roles"] = std::move(authors);
  } else {
    obj["author_roles"] = nullptr;
  }
  if (s.credit) {
    json credit = json::object();
    for (std::size_t l = 0; l < kNumRoles; ++l) {
      credit[std::string(to_string(role_at(l)))] =
          s.credit->credit(static_cast<Eigen::Index>(l));
    }
    obj["credit"] = std::move(credit);
    obj["n_credited"] = s.credit->n_credited;
  } else {
    obj["credit"] = nullptr;
    obj["n_credited"] = nullptr;
  }
  obj["effort_raw"] = s.effort ? vector_json(s.effort->raw) : json(nullptr);
  obj["effort_renorm"] = (s.effort && s.effort->renormalized)
                             ? vector_json(*s.effort->renormalized)
                             : json(nullptr);
  json counts = json::array();
  for (Eigen::Index i = 0; i < s.output.counts.size(); ++i) {
    counts.push_back(s.output.counts(i));
  }
  obj["output_counts"] = std::move(counts);
  obj["output_props"] =
      s.output.proportions ? vector_json(*s.output.proportions) : json(nullptr);
  obj["unlabeled_contexts"] = s.unlabeled_contexts;
  obj["flags"] = s.flags;
  return obj;
}

PaperScores paper_scores_from_json(const json& obj) {
  PaperScores s;
  s.paper_id = obj.at("paper_id").get<std::string>();
  s.n_authors = obj.at("n_authors").get<int>();
  s.disciplines = obj.value("disciplines", std::vector<std::string>{});
  if (const json& authors = obj.value("author_roles", json()); !authors.is_null()) {
    std::vector<RoleSet> roles_by_author;
    for (const json& names : authors) {
      RoleSet roles;
      for (const json& name : names) {
        auto role = parse_credit_role(name.get<std::string>());
        if (!role) throw ValidationError("unknown role " + name.dump());
        roles.set(role_index(*role));
      }
      roles_by_author.push_back(roles);
    }
    s.author_roles = std::move(roles_by_author);
  }
  if (const json& credit = obj.at("credit"); !credit.is_null()) {
    CreditScoreTable table;
    table.n_authors = s.n_authors;
    table.n_credited = obj.at("n_credited").get<int>();
    for (std::size_t l = 0; l < kNumRoles; ++l) {
      table.credit(static_cast<Eigen::Index>(l)) =
          credit.at(std::string(to_string(role_at(l)))).get<double>();
    }
    s.credit = table;
  }
  if (const json& raw = obj.at("effort_raw"); !raw.is_null()) {
    EffortDistribution e;
    e.n_authors = s.n_authors;
    e.raw = vector_from(raw);
    if (const json& renorm = obj.at("effort_renorm"); !renorm.is_null()) {
      e.renormalized = vector_from(renorm);
    }
    s.effort = e;
  }
  const json& counts = obj.at("output_counts");
  TypeCounts c = TypeCounts::Zero();
  for (std::size_t i = 0; i < kNumTypes; ++i) {
    c(static_cast<Eigen::Index>(i)) = counts.at(i).get<long long>();
  }
  s.output = output_distribution(c);
  s.unlabeled_contexts = obj.value("unlabeled_contexts", std::size_t{0});
  s.flags = obj.value("flags", std::vector<std::string>{});
  return s;
}

}  // namespace contribscope
