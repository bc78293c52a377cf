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

// The analysis report: one JSON document assembled from per-paper scores,
// plus CSV exports for plotting.

#ifndef CONTRIBSCOPE_REPORT_HPP_
#define CONTRIBSCOPE_REPORT_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "contribscope/analytics.hpp"
#include "contribscope/scoring.hpp"
#include "contribscope/types.hpp"

namespace contribscope {

/// Raised when the corpus leaves nothing to analyse.
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

struct AnalysisOptions {
  double threshold = kDefaultCotypeThreshold;
  /// Type list of co-occurrence and multi-type share (4 or 5).
  int types = 4;
  /// Type list of the correlations (4 or 5).
  int correlation_types = 5;
  NormDivisor norm = NormDivisor::Cosine;

  /// Throws ValidationError on an out-of-range setting.
  void validate() const;
};

/// Sections: settings, distributions, correlations, group_profiles,
/// role_profiles, cooccurrence, multi_type_share, disciplines, diagnostics.
/// Undefined values are null. Throws EmptyResultError when no paper has
/// either side defined.
nlohmann::ordered_json build_report(std::span<const PaperScores> papers,
                                    const EffortMapping& mapping,
                                    const AnalysisOptions& options = {});

/// Fixed six-decimal rendering of a double; negative zero prints as zero.
std::string format_fixed6(double v);

/// Two-space indented JSON with every float at six decimals and arrays of
/// scalars kept on one line. Ends with a newline.
std::string dump_report(const nlohmann::ordered_json& report);

/// Writes fig2_totals.csv, fig3_profiles.csv, fig4_roles.csv,
/// fig5_cooccurrence.csv, correlations.csv, per_paper_correlation.csv,
/// multi_type_share.csv, disciplines.csv and diagnostics.csv into `dir`.
/// Returns the file names written.
std::vector<std::string> write_report_csvs(const nlohmann::ordered_json& report,
                                           const std::filesystem::path& dir);

}  // namespace contribscope

#endif  // CONTRIBSCOPE_REPORT_HPP_
