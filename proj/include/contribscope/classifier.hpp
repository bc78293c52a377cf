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

// Labels citation contexts with a contribution type.
//
// Two backends implement the same contract: a deterministic cue lexicon and a
// remote inference endpoint. classify_corpus() fronts either one with a
// content-addressed cache and never touches gold labels.

#ifndef CONTRIBSCOPE_CLASSIFIER_HPP_
#define CONTRIBSCOPE_CLASSIFIER_HPP_

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "contribscope/corpus.hpp"
#include "contribscope/text.hpp"
#include "contribscope/types.hpp"

namespace contribscope {

struct Classification {
  ContributionType label = ContributionType::Other;
  /// Lexicon backend: winning score / total matched score (a ratio, not a
  /// calibrated probability). External backend: as returned, if returned.
  std::optional<double> confidence;

  bool operator==(const Classification&) const = default;
};

class BackendUnavailableError : public Error {
 public:
  using Error::Error;
};

class ProtocolViolationError : public Error {
 public:
  using Error::Error;
};

class CueLexicon {
 public:
  struct Entry {
    TermPattern pattern;
    ContributionType type;
    double weight;
  };

  /// CSV with header `pattern,type,weight`; weight must be > 0.
  static CueLexicon from_csv(std::istream& in);
  static CueLexicon from_file(const std::filesystem::path& path);
  static const CueLexicon& default_lexicon();

  void add(std::string_view pattern, ContributionType type, double weight);
  const std::vector<Entry>& entries() const { return entries_; }
  ContributionType default_type() const { return default_type_; }
  /// Digest of the entries; part of the cache key of the lexicon backend.
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::vector<Entry> entries_;
  ContributionType default_type_ = ContributionType::Other;
  std::string fingerprint_;
};

/// Sums matched entry weights per type (each entry counts once) and returns
/// the top type; ties go to the earlier type in canonical order. No match
/// gives (default_type, 0). The placeholder token is ignored.
Classification lexicon_classify(std::string_view text, const CueLexicon& lexicon);

struct EndpointConfig {
  std::string url;  // http(s)://host[:port]/path
  std::string token;
  /// Request text; "{{text}}" is replaced by the context.
  std::string prompt_template = "{{text}}";
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{200};
  double backoff_multiplier = 2.0;
  std::chrono::milliseconds max_backoff{5000};
  std::chrono::milliseconds timeout{10000};

  /// Reads the bearer token from CONTRIBSCOPE_API_TOKEN (empty if unset).
  static std::string token_from_env();
};

/// One POST of `{"text":..., "labels":[...]}`; expects
/// `{"label": <wire name>, "confidence": <0..1, optional>}`. Connection
/// errors, timeouts, 408, 429 and 5xx are retried with exponential backoff;
/// after max_retries retries BackendUnavailableError is thrown. Any other
/// non-2xx status is also BackendUnavailableError. A malformed body or an
/// unknown label throws ProtocolViolationError.
Classification external_classify(std::string_view text,
                                 const EndpointConfig& endpoint);

class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;
  virtual std::string_view backend_id() const = 0;
  virtual LabelSource source() const = 0;
  /// Distinguishes configurations of the same backend in the cache.
  virtual std::string cache_namespace() const = 0;
  /// Must be safe to call concurrently.
  virtual Classification classify(std::string_view text) const = 0;
};

class LexiconBackend : public ClassifierBackend {
 public:
  explicit LexiconBackend(CueLexicon lexicon) : lexicon_(std::move(lexicon)) {}

  std::string_view backend_id() const override { return "lexicon"; }
  LabelSource source() const override { return LabelSource::Lexicon; }
  std::string cache_namespace() const override;
  Classification classify(std::string_view text) const override;

 private:
  CueLexicon lexicon_;
};

class ExternalBackend : public ClassifierBackend {
 public:
  explicit ExternalBackend(EndpointConfig config) : config_(std::move(config)) {}

  std::string_view backend_id() const override { return "external"; }
  LabelSource source() const override { return LabelSource::External; }
  std::string cache_namespace() const override;
  Classification classify(std::string_view text) const override;

 private:
  EndpointConfig config_;
};

struct CacheEntry {
  Classification result;
  std::string backend_id;
  std::chrono::system_clock::time_point stored_at;
};

/// Content-addressed classification cache. With a directory, every entry is
/// also persisted as `<dir>/<hex digest>.json` holding one JSON line
/// `{"label":...,"confidence":...,"backend_id":...}`; files are written to a
/// temporary name and renamed into place. Safe for concurrent use.
class ClassificationCache {
 public:
  ClassificationCache() = default;
  explicit ClassificationCache(std::filesystem::path directory);

  /// Hex SHA-256 of the normalized text and the backend's cache namespace.
  static std::string key_for(std::string_view text, std::string_view ns);

  std::optional<CacheEntry> lookup(const std::string& key);
  void store(const std::string& key, const CacheEntry& entry);
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> directory_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, CacheEntry> memory_;
};

struct ClassifyStats {
  std::array<std::size_t, kNumTypes> label_counts{};
  std::size_t contexts = 0;
  std::size_t gold = 0;
  std::size_t previously_labeled = 0;
  std::size_t classified = 0;
  std::size_t cache_hits = 0;
  std::size_t backend_calls = 0;
  std::size_t protocol_violations = 0;
  std::size_t backend_failures = 0;
  std::size_t unlabeled = 0;
  std::optional<std::string> backend_error;

  double cache_hit_rate() const;
};

struct ClassifyResult {
  Corpus corpus;
  ClassifyStats stats;

  /// True when the backend became unavailable; the corpus still carries
  /// every label that could be produced (from the cache or before failure).
  bool backend_unavailable() const { return stats.backend_error.has_value(); }
};

/// Labels every context that has no label yet. Existing labels (gold or
/// otherwise) are kept as is. The cache is consulted before the backend and
/// filled after every successful call. Once the backend reports
/// unavailability, remaining contexts are served from the cache only.
ClassifyResult classify_corpus(const Corpus& corpus,
                               const ClassifierBackend& backend,
                               ClassificationCache& cache, std::size_t jobs = 1);

}  // namespace contribscope

#endif  // CONTRIBSCOPE_CLASSIFIER_HPP_
