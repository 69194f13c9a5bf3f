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

#include <array>
#include <map>

#include "ufa/fleet.hpp"

namespace ufa {

/// Where a failure class lives in the capacity plan.
///   Dedicated2x      - full standby buffer: provisioned at twice steady demand.
///   Dedicated1xBurst - provisioned at steady demand only; failover capacity
///                      comes from burst clusters.
///   OvercommitPool   - no dedicated cores; the class squats in the idle
///                      buffers of Dedicated2x classes.
enum class CapacityClass : int { Dedicated2x = 0, Dedicated1xBurst, OvercommitPool };

struct PlacementPolicy {
  std::array<CapacityClass, 4> by_class = {CapacityClass::Dedicated2x,
                                           CapacityClass::Dedicated1xBurst,
                                           CapacityClass::OvercommitPool,
                                           CapacityClass::OvercommitPool};

  CapacityClass of(FailureClass c) const { return by_class[static_cast<int>(c)]; }
  CapacityClass& of(FailureClass c) { return by_class[static_cast<int>(c)]; }

  /// Default plan: AlwaysOn keeps the 2x buffer, ActiveMigrate is dedicated
  /// at 1x with burst restoration, RestoreLater and Terminate ride the
  /// overcommit pool.
  static PlacementPolicy standard() { return PlacementPolicy{}; }

  /// Pre-rollout plan: every class holds a full standby buffer.
  static PlacementPolicy legacy2x() {
    PlacementPolicy p;
    p.by_class = {CapacityClass::Dedicated2x, CapacityClass::Dedicated2x,
                  CapacityClass::Dedicated2x, CapacityClass::Dedicated2x};
    return p;
  }
};

/// Provisioned-to-demand core ratio under a placement policy.
///
/// Dedicated2x classes count twice their steady demand; Dedicated1xBurst
/// classes count it once (burst capacity is borrowed, not owned); overcommit
/// classes count nothing as long as the idle halves of the 2x buffers can
/// absorb their steady footprint, and only the overflow beyond that buffer
/// otherwise.
inline double capacity_ratio(const Fleet& fleet, const PlacementPolicy& policy) {
  double demand_total = 0;
  double dedicated = 0;
  double buffer = 0;
  double overcommitted = 0;
  for (const auto& env : fleet.envs) {
    const Service& svc = fleet.services[env.service];
    double cores = static_cast<double>(fleet.required_cores(env));
    demand_total += cores;
    switch (policy.of(svc.failure_class)) {
      case CapacityClass::Dedicated2x:
        dedicated += 2.0 * cores;
        buffer += cores;
        break;
      case CapacityClass::Dedicated1xBurst:
        dedicated += cores;
        break;
      case CapacityClass::OvercommitPool:
        overcommitted += cores;
        break;
    }
  }
  if (demand_total <= 0) return 0.0;
  double overflow = overcommitted > buffer ? overcommitted - buffer : 0.0;
  return (dedicated + overflow) / demand_total;
}

/// Same arithmetic over plain per-class core sums; the hand-auditable oracle
/// used by planning tools and tests.
inline double capacity_ratio_from_cores(const std::map<FailureClass, double>& demand,
                                        const PlacementPolicy& policy) {
  double total = 0, dedicated = 0, buffer = 0, overcommitted = 0;
  for (const auto& [cls, cores] : demand) {
    total += cores;
    switch (policy.of(cls)) {
      case CapacityClass::Dedicated2x:
        dedicated += 2.0 * cores;
        buffer += cores;
        break;
      case CapacityClass::Dedicated1xBurst:
        dedicated += cores;
        break;
      case CapacityClass::OvercommitPool:
        overcommitted += cores;
        break;
    }
  }
  if (total <= 0) return 0.0;
  double overflow = overcommitted > buffer ? overcommitted - buffer : 0.0;
  return (dedicated + overflow) / total;
}

}  // namespace ufa
