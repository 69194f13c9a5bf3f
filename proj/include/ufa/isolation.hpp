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
#include <set>
#include <vector>

#include "ufa/fleet.hpp"

namespace ufa {

/// Scope of a traffic isolation policy. Class policies block whole failure
/// classes (failover isolation, canary gate); target policies block named
/// services (blackhole drills).
struct IsolationScope {
  bool global = true;
  int zone = -1;                 // restrict to one zone when >= 0
  std::vector<int> target_services;  // when non-empty, block only these
};

/// A connectivity block into RestoreLater/Terminate services (or explicit
/// targets). Blocking ramps linearly from 0 to the step fraction over the
/// convergence window, and back down when lifted.
struct IsolationPolicy {
  int id = 0;
  std::vector<FailureClass> blocked_classes = {FailureClass::RestoreLater,
                                               FailureClass::Terminate};
  std::set<int> exempt_services;  // off-boarded services are never blocked
  IsolationScope scope;
  SimTime applied_at{0};
  SimTime convergence = SimTime::seconds(30);
  double target_fraction = 1.0;  // drills ramp through partial fractions
  bool lifting = false;
  SimTime lifted_at{0};
  /// Per-service early unblock (RestoreLater environments re-enabled as they
  /// respawn).
  std::set<int> unblocked_services;

  bool class_blocked(FailureClass c) const {
    return std::find(blocked_classes.begin(), blocked_classes.end(), c) !=
           blocked_classes.end();
  }

  /// Effective blocked fraction for a callee at time t, before scope checks.
  double fraction_at(SimTime t) const {
    auto ramp = [](SimTime since, SimTime window) {
      if (since.ms <= 0) return 0.0;
      if (window.ms <= 0 || since.ms >= window.ms) return 1.0;
      return static_cast<double>(since.ms) / static_cast<double>(window.ms);
    };
    double up = ramp(t - applied_at, convergence) * target_fraction;
    if (!lifting) return up;
    double down = 1.0 - ramp(t - lifted_at, convergence);
    return std::min(up, down * target_fraction);
  }
};

/// Holds the active isolation policies and answers "how blocked is traffic
/// into this service right now".
class IsolationEngine {
 public:
  int apply(IsolationPolicy policy) {
    policy.id = next_id_++;
    policies_.push_back(std::move(policy));
    return policies_.back().id;
  }

  /// Starts the ramp-down. Returns the time at which the policy is fully
  /// inactive.
  SimTime lift(int id, SimTime now) {
    for (auto& p : policies_) {
      if (p.id != id) continue;
      p.lifting = true;
      p.lifted_at = now;
      return now + p.convergence;
    }
    return now;
  }

  void unblock_service(int id, int service) {
    for (auto& p : policies_)
      if (p.id == id) p.unblocked_services.insert(service);
  }

  void remove_expired(SimTime now) {
    std::erase_if(policies_, [now](const IsolationPolicy& p) {
      return p.lifting && now >= p.lifted_at + p.convergence;
    });
  }

  void clear() { policies_.clear(); }

  /// Blocked fraction for calls into `service` (strongest active policy
  /// wins). The zone is the zone the request traverses; -1 matches only
  /// global policies.
  double blocked_fraction(int service, FailureClass cls, int zone, SimTime now) const {
    double worst = 0.0;
    for (const auto& p : policies_) {
      if (!p.scope.global && p.scope.zone >= 0 && p.scope.zone != zone) continue;
      if (!p.scope.target_services.empty()) {
        if (std::find(p.scope.target_services.begin(), p.scope.target_services.end(),
                      service) == p.scope.target_services.end())
          continue;
      } else if (!p.class_blocked(cls)) {
        continue;
      }
      if (p.exempt_services.count(service) || p.unblocked_services.count(service)) continue;
      worst = std::max(worst, p.fraction_at(now));
    }
    return worst;
  }

  bool any_active() const { return !policies_.empty(); }

  const std::vector<IsolationPolicy>& policies() const { return policies_; }
  std::vector<IsolationPolicy>& policies() { return policies_; }

 private:
  std::vector<IsolationPolicy> policies_;
  int next_id_ = 1;
};

}  // namespace ufa
