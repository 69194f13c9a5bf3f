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

#include <algorithm>
#include <vector>

#include "ufa/fleet.hpp"

namespace ufa {

struct QosConfig {
  double evict_above = 0.75;
  double cool_below = 0.70;

  void validate() const {
    if (!(cool_below < evict_above))
      fail(ErrorCode::ConfigError, "qos cool_below must be < evict_above");
  }
};

/// View of one host for the eviction pass: what runs there and what each
/// replica block currently consumes.
struct HostLoad {
  int host = -1;
  int physical_cores = 1;
  double consumed_cores = 0.0;
  struct ReplicaLoad {
    int env = -1;
    int replica_set = -1;  // index into the env's replica_sets
    FailureClass failure_class = FailureClass::Terminate;
    double consumed_cores = 0.0;
  };
  std::vector<ReplicaLoad> replicas;
};

enum class QosActionKind : int { Evict = 0, Throttle, Relocate, Alarm };

inline const char* qos_action_name(QosActionKind k) {
  switch (k) {
    case QosActionKind::Evict: return "Evict";
    case QosActionKind::Throttle: return "Throttle";
    case QosActionKind::Relocate: return "Relocate";
    case QosActionKind::Alarm: return "Alarm";
  }
  return "?";
}

struct QosAction {
  QosActionKind kind = QosActionKind::Evict;
  int host = -1;
  int env = -1;
  int replica_set = -1;
  double consumed_cores = 0.0;
};

/// Eviction pass for one hot host. Above evict_above, Terminate then
/// RestoreLater replicas are evicted largest-consumer-first until the
/// projected utilization drops under cool_below. If that is not enough,
/// ActiveMigrate replicas get throttle/relocate actions instead of eviction.
/// AlwaysOn replicas are never selected; if nothing is selectable an Alarm
/// is raised.
inline std::vector<QosAction> qos_tick(const HostLoad& load, const QosConfig& cfg) {
  cfg.validate();
  std::vector<QosAction> actions;
  const double physical = static_cast<double>(load.physical_cores);
  double util = load.consumed_cores / physical;
  if (util <= cfg.evict_above) return actions;

  auto candidates = load.replicas;
  // Largest consumer first inside each class keeps the eviction count low.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const HostLoad::ReplicaLoad& a, const HostLoad::ReplicaLoad& b) {
                     return a.consumed_cores > b.consumed_cores;
                   });

  double projected = load.consumed_cores;
  for (FailureClass cls : {FailureClass::Terminate, FailureClass::RestoreLater}) {
    for (const auto& r : candidates) {
      if (projected / physical < cfg.cool_below) break;
      if (r.failure_class != cls) continue;
      actions.push_back({QosActionKind::Evict, load.host, r.env, r.replica_set,
                         r.consumed_cores});
      projected -= r.consumed_cores;
    }
  }

  if (projected / physical >= cfg.cool_below) {
    for (const auto& r : candidates) {
      if (projected / physical < cfg.cool_below) break;
      if (r.failure_class != FailureClass::ActiveMigrate) continue;
      actions.push_back({QosActionKind::Throttle, load.host, r.env, r.replica_set,
                         r.consumed_cores});
      actions.push_back({QosActionKind::Relocate, load.host, r.env, r.replica_set,
                         r.consumed_cores});
      projected -= r.consumed_cores;
    }
  }

  // Still hot after exhausting every selectable replica: surface it.
  if (projected / physical >= cfg.cool_below)
    actions.push_back({QosActionKind::Alarm, load.host, -1, -1, 0.0});
  return actions;
}

}  // namespace ufa
