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
#include <set>
#include <string>
#include <vector>

#include "ufa/classifier.hpp"
#include "ufa/fleet.hpp"

namespace ufa {

/// Tier-inversion buckets for fail-close findings.
enum class ViolationCategory : int { AlwaysOnToRestoreLater = 0, ActiveMigrateToRestoreLater, AnyToTerminate };

inline const char* violation_category_name(ViolationCategory c) {
  switch (c) {
    case ViolationCategory::AlwaysOnToRestoreLater: return "AO->RL";
    case ViolationCategory::ActiveMigrateToRestoreLater: return "AM->RL";
    case ViolationCategory::AnyToTerminate: return "*->Terminate";
  }
  return "?";
}

enum class DetectionSource : int { Runtime = 0, Canary, Drill };

inline const char* detection_source_name(DetectionSource s) {
  switch (s) {
    case DetectionSource::Runtime: return "runtime";
    case DetectionSource::Canary: return "canary";
    case DetectionSource::Drill: return "drill";
  }
  return "?";
}

struct Violation {
  EdgeKey edge;
  int caller_service = -1;  // fleet index, -1 when the service is unknown
  int callee_service = -1;
  ViolationCategory category = ViolationCategory::AlwaysOnToRestoreLater;
  DetectionSource detected_by = DetectionSource::Runtime;
  long evidence_n = 0;
  long evidence_k = 0;

  Json to_json() const {
    Json j;
    j["caller_service"] = edge.caller_service;
    j["caller_endpoint"] = edge.caller_endpoint;
    j["callee_service"] = edge.callee_service;
    j["callee_endpoint"] = edge.callee_endpoint;
    j["category"] = violation_category_name(category);
    j["detected_by"] = detection_source_name(detected_by);
    j["evidence"] = Json{{"n", evidence_n}, {"k", evidence_k}};
    return j;
  }
};

inline ViolationCategory category_of(FailureClass caller, FailureClass callee) {
  if (callee == FailureClass::Terminate) return ViolationCategory::AnyToTerminate;
  return caller == FailureClass::AlwaysOn ? ViolationCategory::AlwaysOnToRestoreLater
                                          : ViolationCategory::ActiveMigrateToRestoreLater;
}

/// Every classified fail-close edge whose caller survives failover while the
/// callee is preempted. Callers outside {AlwaysOn, ActiveMigrate} or callees
/// outside {RestoreLater, Terminate} are not inversions.
inline std::vector<Violation> find_tier_inversions(
    const Fleet& fleet, const std::map<EdgeKey, EdgeEvidence>& semantics,
    DetectionSource source = DetectionSource::Runtime) {
  std::vector<Violation> out;
  for (const auto& [key, ev] : semantics) {
    if (ev.semantics != EdgeSemantics::FailClose) continue;
    int caller = fleet.find_service(key.caller_service);
    int callee = fleet.find_service(key.callee_service);
    if (caller < 0 || callee < 0) continue;
    FailureClass cal = fleet.services[caller].failure_class;
    FailureClass cee = fleet.services[callee].failure_class;
    bool caller_critical = cal == FailureClass::AlwaysOn || cal == FailureClass::ActiveMigrate;
    bool callee_preempted = cee == FailureClass::RestoreLater || cee == FailureClass::Terminate;
    if (!caller_critical || !callee_preempted) continue;
    Violation v;
    v.edge = key;
    v.caller_service = caller;
    v.callee_service = callee;
    v.category = category_of(cal, cee);
    v.detected_by = source;
    v.evidence_n = ev.callee_failures;
    v.evidence_k = ev.correlated_failures;
    out.push_back(std::move(v));
  }
  return out;
}

/// Off-boards every violated callee from termination: the service is treated
/// like ActiveMigrate during failover and is exempt from traffic isolation
/// until the violation is resolved. Idempotent; returns the off-boarded set.
inline std::set<int> offboard_violations(Fleet& fleet, const std::vector<Violation>& violations) {
  std::set<int> offboarded;
  for (const auto& v : violations) {
    int callee = v.callee_service >= 0 ? v.callee_service : fleet.find_service(v.edge.callee_service);
    if (callee < 0) continue;
    offboarded.insert(callee);
    for (auto& env : fleet.envs)
      if (env.service == callee) env.offboarded = true;
  }
  return offboarded;
}

inline std::set<int> offboarded_services(const Fleet& fleet) {
  std::set<int> out;
  for (const auto& env : fleet.envs)
    if (env.offboarded) out.insert(env.service);
  return out;
}

inline Json violations_report(const std::vector<Violation>& violations) {
  Json arr = Json::array();
  for (const auto& v : violations) arr.push_back(v.to_json());
  return arr;
}

}  // namespace ufa
