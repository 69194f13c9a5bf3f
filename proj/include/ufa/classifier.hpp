// Copyright 2026 The ufa Authors
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

#pragma once

#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "ufa/core.hpp"
#include "ufa/fleet.hpp"

namespace ufa {

/// One observed RPC with its failure correlation bits.
struct TraceRecord {
  SimTime timestamp{0};
  std::string caller_service;
  int caller_endpoint = 0;
  std::string callee_service;
  int callee_endpoint = 0;
  bool callee_failed = false;
  bool caller_failed = false;

  Json to_json() const {
    Json j;
    j["timestamp"] = timestamp.ms;
    j["caller_service"] = caller_service;
    j["caller_endpoint"] = caller_endpoint;
    j["callee_service"] = callee_service;
    j["callee_endpoint"] = callee_endpoint;
    j["callee_failed"] = callee_failed;
    j["caller_failed"] = caller_failed;
    return j;
  }

  static TraceRecord from_json(const Json& j) {
    TraceRecord r;
    r.timestamp = SimTime::millis(j.at("timestamp").get<std::int64_t>());
    r.caller_service = j.at("caller_service").get<std::string>();
    r.caller_endpoint = j.at("caller_endpoint").get<int>();
    r.callee_service = j.at("callee_service").get<std::string>();
    r.callee_endpoint = j.at("callee_endpoint").get<int>();
    r.callee_failed = j.at("callee_failed").get<bool>();
    r.caller_failed = j.at("caller_failed").get<bool>();
    return r;
  }
};

struct EdgeKey {
  std::string caller_service;
  int caller_endpoint = 0;
  std::string callee_service;
  int callee_endpoint = 0;

  auto tie() const {
    return std::tie(caller_service, caller_endpoint, callee_service, callee_endpoint);
  }
  bool operator<(const EdgeKey& o) const { return tie() < o.tie(); }
  bool operator==(const EdgeKey& o) const { return tie() == o.tie(); }

  static EdgeKey of(const TraceRecord& r) {
    return {r.caller_service, r.caller_endpoint, r.callee_service, r.callee_endpoint};
  }

  std::string str() const {
    return caller_service + "/" + std::to_string(caller_endpoint) + " -> " + callee_service +
           "/" + std::to_string(callee_endpoint);
  }
};

struct ClassifierConfig {
  int min_samples = 20;
  double fail_close_threshold = 0.9;
  double fail_open_threshold = 0.1;

  void validate() const {
    if (min_samples < 1) fail(ErrorCode::ConfigError, "min_samples must be >= 1");
    if (!(0.0 <= fail_open_threshold && fail_open_threshold < fail_close_threshold &&
          fail_close_threshold <= 1.0))
      fail(ErrorCode::ConfigError,
           "thresholds must satisfy 0 <= fail_open < fail_close <= 1");
  }
};

/// Verdict from n observed callee failures of which k also failed the caller.
/// Too few samples is Indeterminate; high correlation is fail-close, low is
/// fail-open, anything between stays Indeterminate.
inline EdgeSemantics classify_counts(long n, long k, const ClassifierConfig& cfg) {
  cfg.validate();
  if (n < cfg.min_samples) return EdgeSemantics::Indeterminate;
  double ratio = static_cast<double>(k) / static_cast<double>(n);
  if (ratio >= cfg.fail_close_threshold) return EdgeSemantics::FailClose;
  if (ratio <= cfg.fail_open_threshold) return EdgeSemantics::FailOpen;
  return EdgeSemantics::Indeterminate;
}

/// Classifies a single edge from its trace records. All records must belong
/// to one (caller, callee) endpoint pair.
inline EdgeSemantics classify_dependency(std::span<const TraceRecord> records,
                                         const ClassifierConfig& cfg) {
  long n = 0, k = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0 && !(EdgeKey::of(records[i]) == EdgeKey::of(records[0])))
      fail(ErrorCode::MixedEdge, "records span multiple edges");
    if (records[i].callee_failed) {
      ++n;
      if (records[i].caller_failed) ++k;
    }
  }
  return classify_counts(n, k, cfg);
}

struct EdgeEvidence {
  long callee_failures = 0;     // n
  long correlated_failures = 0; // k
  EdgeSemantics semantics = EdgeSemantics::Indeterminate;
};

/// Groups a trace by edge and classifies each one. The output covers exactly
/// the edges present in the trace.
inline std::map<EdgeKey, EdgeEvidence> analyze_trace(std::span<const TraceRecord> records,
                                                     const ClassifierConfig& cfg) {
  cfg.validate();
  std::map<EdgeKey, EdgeEvidence> out;
  for (const auto& r : records) {
    auto& ev = out[EdgeKey::of(r)];
    if (r.callee_failed) {
      ++ev.callee_failures;
      if (r.caller_failed) ++ev.correlated_failures;
    }
  }
  for (auto& [key, ev] : out)
    ev.semantics = classify_counts(ev.callee_failures, ev.correlated_failures, cfg);
  return out;
}

}  // namespace ufa
