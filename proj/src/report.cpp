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

#include "contribscope/report.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>

namespace contribscope {
namespace {

using ojson = nlohmann::ordered_json;

ojson names_of(const std::vector<ContributionType>& types) {
  ojson a = ojson::array();
  for (ContributionType t : types) a.push_back(std::string(to_string(t)));
  return a;
}

ojson all_type_names() {
  return names_of({kAllTypes.begin(), kAllTypes.end()});
}

ojson role_name_list() {
  ojson a = ojson::array();
  for (std::size_t l = 0; l < kNumRoles; ++l) a.push_back(std::string(to_string(role_at(l))));
  return a;
}

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

template <typename Derived>
ojson vector_json(const Eigen::DenseBase<Derived>& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_floating_point_v<typename Derived::Scalar>) {
      a.push_back(number_or_null(static_cast<double>(v(i))));
    } else {
      a.push_back(v(i));
    }
  }
  return a;
}

template <typename Derived>
ojson matrix_json(const Eigen::DenseBase<Derived>& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i)));
  return rows;
}

template <typename T>
ojson optional_json(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson distribution_json(const OutputDistribution& d) {
  ojson o = ojson::object();
  o["counts"] = vector_json(d.counts);
  o["total"] = d.total;
  o["proportions"] = d.proportions ? vector_json(*d.proportions) : ojson(nullptr);
  return o;
}

ojson correlation_json(const CorrelationResult& c) {
  ojson o = ojson::object();
  o["method"] = std::string(to_string(c.method));
  o["r"] = optional_json(c.r);
  o["p"] = optional_json(c.p);
  o["n"] = c.n;
  return o;
}

ojson group_profile_json(std::span<const PaperScores> papers, GroupBy by, ProfileOf what) {
  GroupProfile g;
  try {
    g = normalized_group_profile(papers, by, what);
  } catch (const std::invalid_argument&) {
    return nullptr;
  }
  ojson o = ojson::object();
  o["group_by"] = std::string(to_string(by));
  o["profile_of"] = std::string(to_string(what));
  o["columns"] = what == ProfileOf::Roles14 ? role_name_list() : all_type_names();
  o["eligible"] = g.eligible;
  o["excluded_other"] = g.excluded_other;
  o["ties"] = g.ties;
  o["baseline"] = vector_json(g.baseline);
  ojson groups = ojson::array();
  for (const auto& [type, values] : g.normalized) {
    ojson row = ojson::object();
    row["group"] = std::string(to_string(type));
    row["n"] = g.group_sizes.at(type);
    row["values"] = vector_json(values);
    groups.push_back(std::move(row));
  }
  o["groups"] = std::move(groups);
  return o;
}

ojson cooccurrence_json(const CooccurrenceMatrix& m, std::size_t papers, NormDivisor norm) {
  const NormalizedMatrix s = normalize_diagonal(m, norm);
  ojson o = ojson::object();
  o["papers"] = papers;
  o["units"] = m.units;
  o["counts"] = matrix_json(m.counts);
  o["normalized"] = matrix_json(s.values);
  return o;
}

ojson share_json(const Share& s) {
  ojson o = ojson::object();
  o["share"] = optional_json(s.value());
  o["hits"] = s.hits;
  o["eligible"] = s.eligible;
  return o;
}

bool input_defined(const PaperScores& p) { return p.effort && p.effort->defined(); }

// --- rendering ------------------------------------------------------------

std::string scalar_text(const ojson& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    return std::isfinite(v) ? format_fixed6(v) : "null";
  }
  return j.dump(-1, ' ', false, ojson::error_handler_t::replace);
}

bool is_container(const ojson& j) { return j.is_object() || j.is_array(); }

void render(const ojson& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : j.items()) {
      out += pad;
      out += ojson(key).dump();
      out += ": ";
      render(value, indent + 2, out);
      out += ++i < j.size() ? ",\n" : "\n";
    }
    out += close_pad + "}";
    return;
  }
  if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (std::none_of(j.begin(), j.end(), is_container)) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ", ";
        out += scalar_text(j[i]);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      render(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += close_pad + "]";
    return;
  }
  out += scalar_text(j);
}

// --- CSV ------------------------------------------------------------------

std::string csv_field(const ojson& j) {
  if (j.is_null()) return "";
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  return scalar_text(j);
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::initializer_list<const char*> header)
      : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path.string());
    std::size_t i = 0;
    for (const char* h : header) out_ << (i++ ? "," : "") << h;
    out_ << '\n';
  }

  void row(std::initializer_list<ojson> fields) {
    std::size_t i = 0;
    for (const ojson& f : fields) out_ << (i++ ? "," : "") << csv_field(f);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

const ojson& section(const ojson& report, const char* key) {
  static const ojson kNull;
  auto it = report.find(key);
  return it == report.end() ? kNull : *it;
}

void profile_rows(CsvFile& csv, const ojson& profile) {
  if (profile.is_null()) return;
  const ojson& columns = profile["columns"];
  const ojson& by = profile["group_by"];
  const ojson& of = profile["profile_of"];
  for (std::size_t c = 0; c < columns.size(); ++c) {
    csv.row({by, of, "baseline", profile["eligible"], columns[c], profile["baseline"][c]});
  }
  for (const ojson& g : profile["groups"]) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      csv.row({by, of, g["group"], g["n"], columns[c], g["values"][c]});
    }
  }
}

}  // namespace

void AnalysisOptions::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ValidationError("threshold must lie in (0, 1)");
  }
  if (types != 4 && types != 5) throw ValidationError("types must be 4 or 5");
  if (correlation_types != 4 && correlation_types != 5) {
    throw ValidationError("correlation_types must be 4 or 5");
  }
}

std::string format_fixed6(double v) {
  std::string s = fmt::format("{:.6f}", v);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

ojson build_report(std::span<const PaperScores> papers, const EffortMapping& mapping,
                   const AnalysisOptions& options) {
  options.validate();
  if (papers.empty()) throw EmptyResultError("no papers to analyse");

  std::vector<PaperAssignments> assignments;
  std::vector<TypeVector> output_props;
  std::size_t with_both = 0;
  std::size_t no_assignment = 0;
  std::size_t empty_assignment = 0;
  std::size_t no_contexts = 0;
  std::size_t unlabeled = 0;
  std::size_t ties_input = 0;
  std::size_t ties_output = 0;
  std::map<std::string, std::size_t> flags;
  for (const PaperScores& p : papers) {
    if (input_defined(p) && p.author_roles) {
      assignments.push_back(*p.author_roles);
      if (dominant_type_detail(*p.effort->renormalized).tied) ++ties_input;
    }
    if (p.output.proportions) {
      output_props.push_back(*p.output.proportions);
      if (dominant_type_detail(*p.output.proportions).tied) ++ties_output;
    }
    if (input_defined(p) && p.output.proportions) ++with_both;
    if (!p.author_roles) {
      ++no_assignment;
    } else if (!input_defined(p)) {
      ++empty_assignment;
    }
    if (p.output.total == 0) ++no_contexts;
    unlabeled += p.unlabeled_contexts;
    for (const std::string& f : p.flags) ++flags[f];
  }
  if (assignments.empty() && output_props.empty()) {
    throw EmptyResultError("no paper has a defined input or output distribution");
  }

  ojson report = ojson::object();

  ojson settings = ojson::object();
  settings["threshold"] = options.threshold;
  settings["types"] = options.types;
  settings["correlation_types"] = options.correlation_types;
  settings["norm"] = std::string(to_string(options.norm));
  report["settings"] = std::move(settings);

  {
    ojson d = ojson::object();
    d["types"] = all_type_names();
    ojson output = distribution_json(corpus_output_distribution(papers));
    output["papers"] = output_props.size();
    d["output"] = std::move(output);
    const InputTotals in = corpus_input_totals(papers);
    ojson input = ojson::object();
    input["sum_raw"] = vector_json(in.sum);
    input["proportions"] = in.proportions ? vector_json(*in.proportions) : ojson(nullptr);
    input["papers"] = in.papers;
    d["input"] = std::move(input);
    report["distributions"] = std::move(d);
  }

  std::size_t per_paper_undefined = 0;
  {
    ojson c = ojson::object();
    c["types"] = names_of(analytic_types(options.correlation_types));
    const CorrelationOptions co{options.correlation_types};
    try {
      c["pooled"] = correlation_json(pooled_correlation(papers, co));
    } catch (const std::invalid_argument&) {
      c["pooled"] = nullptr;
    }
    try {
      const PerPaperCorrelation pp = per_paper_correlation(papers, co);
      ojson s = correlation_json(pp.summary);
      s["excluded"] = pp.excluded;
      ojson list = ojson::array();
      for (const auto& [id, r] : pp.per_paper) {
        ojson row = ojson::object();
        row["paper_id"] = id;
        row["r"] = optional_json(r);
        list.push_back(std::move(row));
      }
      s["per_paper"] = std::move(list);
      per_paper_undefined = pp.excluded;
      c["per_paper_mean"] = std::move(s);
    } catch (const std::invalid_argument&) {
      per_paper_undefined = with_both;
      c["per_paper_mean"] = nullptr;
    }
    report["correlations"] = std::move(c);
  }

  {
    ojson g = ojson::object();
    g["by_dominant_input"] =
        group_profile_json(papers, GroupBy::DominantInput, ProfileOf::Output5);
    g["by_dominant_output"] =
        group_profile_json(papers, GroupBy::DominantOutput, ProfileOf::Input5);
    report["group_profiles"] = std::move(g);
    ojson r = ojson::object();
    r["by_dominant_output"] =
        group_profile_json(papers, GroupBy::DominantOutput, ProfileOf::Roles14);
    r["by_dominant_input"] =
        group_profile_json(papers, GroupBy::DominantInput, ProfileOf::Roles14);
    report["role_profiles"] = std::move(r);
  }

  {
    ojson c = ojson::object();
    c["types"] = names_of(analytic_types(options.types));
    c["normalization"] = std::string(to_string(options.norm));
    c["input"] = cooccurrence_json(
        input_cooccurrence(std::span<const PaperAssignments>(assignments), mapping,
                           options.types),
        assignments.size(), options.norm);
    c["output"] = cooccurrence_json(
        output_cooccurrence(std::span<const TypeVector>(output_props), options.threshold,
                            options.types),
        output_props.size(), options.norm);
    report["cooccurrence"] = std::move(c);
  }

  {
    ojson m = ojson::object();
    m["input"] = share_json(multi_type_share_input(
        std::span<const PaperAssignments>(assignments), mapping, options.types));
    m["output"] = share_json(multi_type_share_output(
        std::span<const TypeVector>(output_props), options.threshold, options.types));
    report["multi_type_share"] = std::move(m);
  }

  {
    ojson d = ojson::object();
    for (const auto& [tag, dist] : discipline_breakdown(papers)) {
      d[tag] = distribution_json(dist);
    }
    report["disciplines"] = std::move(d);
  }

  {
    ojson d = ojson::object();
    d["papers"] = papers.size();
    d["papers_with_input"] = assignments.size();
    d["papers_with_output"] = output_props.size();
    d["papers_with_both"] = with_both;
    d["papers_without_assignment"] = no_assignment;
    d["papers_with_empty_assignment"] = empty_assignment;
    d["papers_without_contexts"] = no_contexts;
    d["unlabeled_contexts"] = unlabeled;
    d["per_paper_r_undefined"] = per_paper_undefined;
    d["dominant_ties_input"] = ties_input;
    d["dominant_ties_output"] = ties_output;
    ojson f = ojson::object();
    for (const auto& [flag, n] : flags) f[flag] = n;
    d["flags"] = std::move(f);
    report["diagnostics"] = std::move(d);
  }
  return report;
}

std::string dump_report(const ojson& report) {
  std::string out;
  render(report, 0, out);
  out += '\n';
  return out;
}

std::vector<std::string> write_report_csvs(const ojson& report,
                                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto open = [&](const char* name, std::initializer_list<const char*> header) {
    written.emplace_back(name);
    return CsvFile(dir / name, header);
  };

  {
    CsvFile csv = open("fig2_totals.csv", {"perspective", "type", "value", "proportion"});
    const ojson& d = section(report, "distributions");
    if (!d.is_null()) {
      const ojson& types = d["types"];
      const ojson& out = d["output"];
      const ojson& in = d["input"];
      for (std::size_t i = 0; i < types.size(); ++i) {
        csv.row({"output", types[i], out["counts"][i],
                 out["proportions"].is_null() ? ojson() : out["proportions"][i]});
      }
      for (std::size_t i = 0; i < types.size(); ++i) {
        csv.row({"input", types[i], in["sum_raw"][i],
                 in["proportions"].is_null() ? ojson() : in["proportions"][i]});
      }
    }
  }
  {
    CsvFile csv =
        open("fig3_profiles.csv", {"group_by", "profile_of", "group", "n", "column", "value"});
    const ojson& g = section(report, "group_profiles");
    if (!g.is_null()) {
      for (const auto& [key, profile] : g.items()) profile_rows(csv, profile);
    }
  }
  {
    CsvFile csv =
        open("fig4_roles.csv", {"group_by", "profile_of", "group", "n", "column", "value"});
    const ojson& r = section(report, "role_profiles");
    if (!r.is_null()) {
      for (const auto& [key, profile] : r.items()) profile_rows(csv, profile);
    }
  }
  {
    CsvFile csv =
        open("fig5_cooccurrence.csv", {"perspective", "row", "col", "count", "strength"});
    const ojson& c = section(report, "cooccurrence");
    if (!c.is_null()) {
      const ojson& types = c["types"];
      for (const char* perspective : {"input", "output"}) {
        const ojson& m = c[perspective];
        for (std::size_t i = 0; i < types.size(); ++i) {
          for (std::size_t j = 0; j < types.size(); ++j) {
            csv.row({perspective, types[i], types[j], m["counts"][i][j],
                     m["normalized"][i][j]});
          }
        }
      }
    }
  }
  {
    CsvFile csv = open("correlations.csv", {"method", "r", "p", "n", "excluded"});
    CsvFile per_paper = open("per_paper_correlation.csv", {"paper_id", "r"});
    const ojson& c = section(report, "correlations");
    if (!c.is_null()) {
      for (const char* key : {"pooled", "per_paper_mean"}) {
        const ojson& s = c[key];
        if (s.is_null()) continue;
        csv.row({s["method"], s["r"], s["p"], s["n"],
                 s.contains("excluded") ? s["excluded"] : ojson()});
      }
      if (!c["per_paper_mean"].is_null()) {
        for (const ojson& row : c["per_paper_mean"]["per_paper"]) {
          per_paper.row({row["paper_id"], row["r"]});
        }
      }
    }
  }
  {
    CsvFile csv = open("multi_type_share.csv", {"perspective", "share", "hits", "eligible"});
    const ojson& m = section(report, "multi_type_share");
    if (!m.is_null()) {
      for (const char* perspective : {"input", "output"}) {
        const ojson& s = m[perspective];
        csv.row({perspective, s["share"], s["hits"], s["eligible"]});
      }
    }
  }
  {
    CsvFile csv = open("disciplines.csv", {"discipline", "type", "count", "proportion"});
    const ojson& d = section(report, "disciplines");
    const ojson types = all_type_names();
    if (!d.is_null()) {
      for (const auto& [tag, dist] : d.items()) {
        for (std::size_t i = 0; i < types.size(); ++i) {
          csv.row({tag, types[i], dist["counts"][i],
                   dist["proportions"].is_null() ? ojson() : dist["proportions"][i]});
        }
      }
    }
  }
  {
    CsvFile csv = open("diagnostics.csv", {"key", "value"});
    const ojson& d = section(report, "diagnostics");
    if (!d.is_null()) {
      for (const auto& [key, value] : d.items()) {
        if (value.is_object()) {
          for (const auto& [flag, n] : value.items()) csv.row({key + ":" + flag, n});
        } else {
          csv.row({key, value});
        }
      }
    }
  }
  return written;
}

}  // namespace contribscope
