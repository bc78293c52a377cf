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

#include "contribscope/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "contribscope/parallel.hpp"
#include "csv_reader.hpp"
#include "default_data.hpp"

namespace contribscope {
namespace {

using nlohmann::json;

std::string strip_placeholder(std::string_view text) {
  std::string out(text);
  for (std::size_t pos = out.find(kPlaceholder); pos != std::string::npos;
       pos = out.find(kPlaceholder, pos)) {
    out.replace(pos, kPlaceholder.size(), " ");
  }
  return out;
}

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw BackendUnavailableError("endpoint url lacks a scheme: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool transient_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

Classification parse_response(const std::string& body) {
  json obj = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ProtocolViolationError("endpoint response is not a JSON object");
  }
  auto label = obj.find("label");
  if (label == obj.end() || !label->is_string()) {
    throw ProtocolViolationError("endpoint response has no string label");
  }
  Classification out;
  const std::string name = label->get<std::string>();
  bool known = false;
  for (ContributionType t : kAllTypes) {
    if (name == to_string(t)) {
      out.label = t;
      known = true;
    }
  }
  if (!known) throw ProtocolViolationError("unknown label '" + name + "'");
  if (auto conf = obj.find("confidence"); conf != obj.end() && !conf->is_null()) {
    if (!conf->is_number()) {
      throw ProtocolViolationError("confidence is not a number");
    }
    const double v = conf->get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ProtocolViolationError("confidence outside [0,1]");
    }
    out.confidence = v;
  }
  return out;
}

std::optional<Classification> read_cache_line(const std::string& line,
                                              std::string* backend_id) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) return std::nullopt;
  auto label = obj.find("label");
  if (label == obj.end() || !label->is_string()) return std::nullopt;
  auto type = parse_contribution_type(label->get<std::string>());
  if (!type) return std::nullopt;
  Classification c{*type, std::nullopt};
  if (auto conf = obj.find("confidence"); conf != obj.end() && conf->is_number()) {
    c.confidence = conf->get<double>();
  }
  if (auto id = obj.find("backend_id"); id != obj.end() && id->is_string()) {
    *backend_id = id->get<std::string>();
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lexicon

CueLexicon CueLexicon::from_csv(std::istream& in) {
  CueLexicon lex;
  read_csv(in, {"pattern", "type", "weight"},
           [&lex](std::size_t line, const std::vector<std::string>& f) {
             const std::string where = "cue lexicon line " + std::to_string(line);
             auto type = parse_contribution_type(f[1]);
             if (!type) throw ValidationError(where + ": unknown type '" + f[1] + "'");
             double weight = 0.0;
             try {
               std::size_t used = 0;
               weight = std::stod(f[2], &used);
               if (used != f[2].size()) throw std::invalid_argument(f[2]);
             } catch (const std::exception&) {
               throw ValidationError(where + ": bad weight '" + f[2] + "'");
             }
             if (!(weight > 0.0) || !std::isfinite(weight)) {
               throw ValidationError(where + ": weight must be positive");
             }
             if (TermPattern(f[0]).empty()) {
               throw ValidationError(where + ": empty pattern");
             }
             lex.add(f[0], *type, weight);
           });
  return lex;
}

CueLexicon CueLexicon::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read cue lexicon: " + path.string());
  return from_csv(in);
}

const CueLexicon& CueLexicon::default_lexicon() {
  static const CueLexicon kDefault = [] {
    std::istringstream in{std::string(default_cue_lexicon_csv())};
    return from_csv(in);
  }();
  return kDefault;
}

void CueLexicon::add(std::string_view pattern, ContributionType type,
                     double weight) {
  if (!(weight > 0.0)) throw ValidationError("cue weight must be positive");
  TermPattern compiled(pattern);
  if (compiled.empty()) throw ValidationError("empty cue pattern");
  entries_.push_back({std::move(compiled), type, weight});
  std::string digest_input = fingerprint_;
  digest_input += fmt::format("{}\t{}\t{}\n", entries_.back().pattern.source(),
                              to_string(type), weight);
  fingerprint_ = sha256_hex(digest_input);
}

Classification lexicon_classify(std::string_view text, const CueLexicon& lexicon) {
  const std::vector<std::string> tokens =
      word_tokens(strip_placeholder(normalize_text(text)));
  std::array<double, kNumTypes> scores{};
  double total = 0.0;
  for (const CueLexicon::Entry& e : lexicon.entries()) {
    if (e.pattern.matches(tokens)) {
      scores[type_index(e.type)] += e.weight;
      total += e.weight;
    }
  }
  if (total <= 0.0) return {lexicon.default_type(), 0.0};
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumTypes; ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return {kAllTypes[best], scores[best] / total};
}

std::string LexiconBackend::cache_namespace() const {
  return "lexicon:" + lexicon_.fingerprint();
}

Classification LexiconBackend::classify(std::string_view text) const {
  return lexicon_classify(text, lexicon_);
}

// ---------------------------------------------------------------------------
// External endpoint

std::string EndpointConfig::token_from_env() {
  const char* v = std::getenv("CONTRIBSCOPE_API_TOKEN");
  return v == nullptr ? std::string() : std::string(v);
}

Classification external_classify(std::string_view text,
                                 const EndpointConfig& endpoint) {
  const ParsedUrl url = parse_url(endpoint.url);

  std::string prompt = endpoint.prompt_template;
  const std::string slot = "{{text}}";
  const std::size_t at = prompt.find(slot);
  if (at == std::string::npos) {
    prompt = std::string(text);
  } else {
    prompt.replace(at, slot.size(), text);
  }
  json body = json::object();
  body["text"] = prompt;
  json labels = json::array();
  for (ContributionType t : kAllTypes) labels.push_back(std::string(to_string(t)));
  body["labels"] = std::move(labels);
  const std::string payload = body.dump(-1, ' ', false, json::error_handler_t::replace);

  httplib::Headers headers;
  if (!endpoint.token.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint.token);
  }

  auto delay = endpoint.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      const auto next = std::chrono::milliseconds(static_cast<long long>(
          static_cast<double>(delay.count()) * endpoint.backoff_multiplier));
      delay = std::min(next, endpoint.max_backoff);
    }
    httplib::Client client(url.scheme_host_port);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        endpoint.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Result res = client.Post(url.path, headers, payload, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) return parse_response(res->body);
    last_error = "HTTP status " + std::to_string(res->status);
    if (!transient_status(res->status)) break;
  }
  throw BackendUnavailableError("external classifier unavailable at " +
                                endpoint.url + ": " + last_error);
}

std::string ExternalBackend::cache_namespace() const {
  return "external:" + sha256_hex(config_.url + "\n" + config_.prompt_template);
}

Classification ExternalBackend::classify(std::string_view text) const {
  return external_classify(text, config_);
}

// ---------------------------------------------------------------------------
// Cache

ClassificationCache::ClassificationCache(std::filesystem::path directory)
    : directory_(std::move(directory)) {
  std::filesystem::create_directories(*directory_);
}

std::string ClassificationCache::key_for(std::string_view text,
                                         std::string_view ns) {
  std::string input = normalize_text(text);
  input.push_back('\x1f');
  input.append(ns);
  return sha256_hex(input);
}

std::optional<CacheEntry> ClassificationCache::lookup(const std::string& key) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = memory_.find(key); it != memory_.end()) return it->second;
  }
  if (!directory_) return std::nullopt;
  const auto path = *directory_ / (key + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  std::getline(in, line);
  CacheEntry entry;
  auto parsed = read_cache_line(line, &entry.backend_id);
  if (!parsed) return std::nullopt;
  entry.result = *parsed;
  std::error_code ec;
  const auto mtime = std::filesystem::last_write_time(path, ec);
  entry.stored_at = std::chrono::system_clock::now();
  if (!ec) {
    entry.stored_at += std::chrono::duration_cast<std::chrono::system_clock::duration>(
        mtime - std::filesystem::file_time_type::clock::now());
  }
  std::lock_guard<std::mutex> lock(mutex_);
  memory_.emplace(key, entry);
  return entry;
}

void ClassificationCache::store(const std::string& key, const CacheEntry& entry) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    memory_.insert_or_assign(key, entry);
  }
  if (!directory_) return;
  json obj = json::object();
  obj["label"] = std::string(to_string(entry.result.label));
  obj["confidence"] = entry.result.confidence ? json(*entry.result.confidence)
                                              : json(nullptr);
  obj["backend_id"] = entry.backend_id;

  static std::atomic<unsigned long long> counter{0};
  const auto final_path = *directory_ / (key + ".json");
  const auto tmp_path =
      *directory_ / fmt::format("{}.json.tmp.{}.{}", key,
                                std::hash<std::thread::id>{}(std::this_thread::get_id()),
                                counter++);
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    if (!out) throw IoError("cannot write cache entry: " + tmp_path.string());
    out << obj.dump() << '\n';
  }
  std::filesystem::rename(tmp_path, final_path);
}

std::size_t ClassificationCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return memory_.size();
}

// ---------------------------------------------------------------------------

double ClassifyStats::cache_hit_rate() const {
  const std::size_t attempts = cache_hits + backend_calls;
  return attempts == 0 ? 0.0
                       : static_cast<double>(cache_hits) / static_cast<double>(attempts);
}

ClassifyResult classify_corpus(const Corpus& corpus,
                               const ClassifierBackend& backend,
                               ClassificationCache& cache, std::size_t jobs) {
  ClassifyResult result{corpus, {}};

  struct Slot {
    std::size_t paper;
    std::size_t pos;
  };
  enum class Outcome { CacheHit, Classified, Violation, Unavailable, Skipped };
  std::vector<Slot> todo;
  for (std::size_t p = 0; p < corpus.paper_count(); ++p) {
    const auto& group = corpus.contexts_of(p);
    for (std::size_t i = 0; i < group.size(); ++i) {
      ++result.stats.contexts;
      if (group[i].label) {
        if (group[i].label_source == LabelSource::Gold) {
          ++result.stats.gold;
        } else {
          ++result.stats.previously_labeled;
        }
        continue;
      }
      todo.push_back({p, i});
    }
  }

  const std::string ns = backend.cache_namespace();
  std::vector<std::optional<Classification>> labels(todo.size());
  std::vector<Outcome> outcomes(todo.size(), Outcome::Skipped);
  std::atomic<bool> backend_down{false};
  std::mutex error_mutex;
  std::optional<std::string> first_error;

  parallel_for(todo.size(), jobs, [&](std::size_t k) {
    const CitationContext& c = corpus.contexts_of(todo[k].paper)[todo[k].pos];
    const std::string key = ClassificationCache::key_for(c.text, ns);
    if (auto hit = cache.lookup(key)) {
      labels[k] = hit->result;
      outcomes[k] = Outcome::CacheHit;
      return;
    }
    if (backend_down.load()) return;
    try {
      Classification fresh = backend.classify(c.text);
      cache.store(key, {fresh, std::string(backend.backend_id()),
                        std::chrono::system_clock::now()});
      labels[k] = fresh;
      outcomes[k] = Outcome::Classified;
    } catch (const ProtocolViolationError&) {
      outcomes[k] = Outcome::Violation;
    } catch (const BackendUnavailableError& e) {
      outcomes[k] = Outcome::Unavailable;
      backend_down.store(true);
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = e.what();
    }
  });

  for (std::size_t k = 0; k < todo.size(); ++k) {
    switch (outcomes[k]) {
      case Outcome::CacheHit:
        ++result.stats.cache_hits;
        break;
      case Outcome::Classified:
        ++result.stats.backend_calls;
        break;
      case Outcome::Violation:
        ++result.stats.backend_calls;
        ++result.stats.protocol_violations;
        break;
      case Outcome::Unavailable:
        ++result.stats.backend_calls;
        ++result.stats.backend_failures;
        break;
      case Outcome::Skipped:
        break;
    }
    if (!labels[k]) continue;
    CitationContext& c = result.corpus.mutable_contexts_of(todo[k].paper)[todo[k].pos];
    c.label = labels[k]->label;
    c.confidence = labels[k]->confidence;
    c.label_source = backend.source();
    ++result.stats.classified;
  }
  result.stats.backend_error = first_error;

  for (std::size_t p = 0; p < result.corpus.paper_count(); ++p) {
    for (const CitationContext& c : result.corpus.contexts_of(p)) {
      if (c.label) {
        ++result.stats.label_counts[type_index(*c.label)];
      } else {
        ++result.stats.unlabeled;
      }
    }
  }
  return result;
}

}  // namespace contribscope
