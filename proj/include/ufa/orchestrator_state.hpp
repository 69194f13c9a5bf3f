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

#include "ufa/core.hpp"
#include "ufa/routing.hpp"

namespace ufa {

enum class Phase : int {
  Steady = 0,
  Locked,
  Preheating,
  Evicting,
  Converting,
  Migrating,
  Restoring,
  FailedOver,
  FailingBack,
  Unlocking,
};

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Steady: return "Steady";
    case Phase::Locked: return "Locked";
    case Phase::Preheating: return "Preheating";
    case Phase::Evicting: return "Evicting";
    case Phase::Converting: return "Converting";
    case Phase::Migrating: return "Migrating";
    case Phase::Restoring: return "Restoring";
    case Phase::FailedOver: return "FailedOver";
    case Phase::FailingBack: return "FailingBack";
    case Phase::Unlocking: return "Unlocking";
  }
  return "?";
}

struct OrchestratorState {
  Phase phase = Phase::Steady;
  FailoverMode mode = FailoverMode::NonPeak;
  int from_region = -1;
  int to_region = -1;
  std::map<int, SimTime> phase_entered;  // keyed by Phase value
  std::set<int> locks;                   // locked environment indices

  // Failover progress.
  bool preheated = false;
  bool prefetch_ready = false;
  int isolation_policy = -1;  // active global policy id, -1 when none
  std::vector<int> mbb_queue;
  int mbb_in_flight = 0;
  int mbb_parallelism_cap = 2000;
  std::vector<int> rl_restore_queue;
  int rl_restores_pending = 0;
  int city_batches_pending = 0;
  bool city_move_paused = false;
  bool burst_ready = false;

  // Failback progress.
  std::vector<int> failback_queue;
  int failback_migrations_pending = 0;
  int terminate_restores_pending = 0;
  std::set<int> resumed_batch_clusters;

  SimTime failover_at{-1};
  SimTime failedover_at{-1};
  SimTime failback_at{-1};
  SimTime steady_again_at{-1};

  bool aborted = false;
  std::string abort_reason;

  bool failover_active() const {
    return phase != Phase::Steady && phase != Phase::FailedOver;
  }
};

}  // namespace ufa
