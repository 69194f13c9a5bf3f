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
#include <string>
#include <vector>

#include "ufa/batch.hpp"
#include "ufa/capacity.hpp"
#include "ufa/classifier.hpp"
#include "ufa/cloud.hpp"
#include "ufa/evaluate.hpp"
#include "ufa/fleet.hpp"
#include "ufa/fleet_gen.hpp"
#include "ufa/isolation.hpp"
#include "ufa/metrics.hpp"
#include "ufa/orchestrator_state.hpp"
#include "ufa/qos.hpp"
#include "ufa/routing.hpp"
#include "ufa/rng.hpp"
#include "ufa/scheduler.hpp"
#include "ufa/sim.hpp"
#include "ufa/workload.hpp"

namespace ufa {

/// Modeled CPU consumption per required core at 1x routed traffic, by
/// failure class. The defaults are calibration data chosen so a populated
/// overcommit pool puts steady regional utilization near 30% while a
/// legacy-provisioned fleet sits near 20%.
struct UtilizationCoeffs {
  std::array<double, 4> by_class = {0.65, 0.20, 0.17, 0.17};

  double of(FailureClass c) const { return by_class[static_cast<int>(c)]; }
};

struct WorldConfig {
  SimTime horizon = SimTime::hours(20);
  SimTime tick = SimTime::seconds(10);
  SimTime stability_interval = SimTime::minutes(2);
  double burst_safety_margin = 1.1;
  int mbb_parallelism_cap = 2000;
  double health_floor = 0.999;
  double mode_threshold = 0.85;
  double weekly_peak_rps = 0.0;  // 0 derives a peak just above current volume
  double ambient_error_rate = 1e-4;
  double alpha_mem = 0.75;
};

/// All mutable simulation state for one run. Owned by a single thread;
/// independent worlds never share anything.
struct World {
  SimKernel kernel;
  SplitRng rng;
  Fleet fleet;
  FleetProfile profile;
  PlacementPolicy policy = PlacementPolicy::standard();
  RoutingTable routing;
  IsolationEngine isolation;
  UtilizationCoeffs coeffs;
  QosConfig qos;
  SpawnerConfig spawner;
  CloudProvider cloud;
  ClassifierConfig classifier_cfg;
  RegressionThresholds regression;
  RootTierMix root_mix;
  WorldConfig cfg;
  MetricsCollector metrics;
  OrchestratorState orch;

  // Per-tick scratch, refreshed by update_consumption().
  std::vector<double> env_demand_by_region[2];
  std::vector<char> service_serving;

  void seed(std::uint64_t s) { rng = SplitRng(s); }

  void init_routing() {
    std::vector<int> regions;
    regions.reserve(fleet.cities.size());
    for (const auto& c : fleet.cities) regions.push_back(c.primary_region);
    routing.init(fleet.cities.size(), regions);
  }

  double total_rps() const {
    double sum = 0;
    for (const auto& c : fleet.cities) sum += c.traffic_rps;
    return sum;
  }

  double routed_rps(int region) const {
    double sum = 0;
    for (std::size_t i = 0; i < fleet.cities.size(); ++i)
      if (routing.region_of(static_cast<int>(i)) == region) sum += fleet.cities[i].traffic_rps;
    return sum;
  }

  /// Share of global traffic a region currently serves.
  double routed_share(int region) const {
    double total = total_rps();
    return total > 0 ? routed_rps(region) / total : 0.0;
  }

  double weekly_peak_rps() const {
    return cfg.weekly_peak_rps > 0 ? cfg.weekly_peak_rps : total_rps() / 0.9;
  }

  int canary_zone(int region) const {
    for (std::size_t z = 0; z < fleet.zones.size(); ++z)
      if (fleet.zones[z].region == region && fleet.zones[z].canary) return static_cast<int>(z);
    return -1;
  }

  /// Zone a request lands in within a region, weighted by zone traffic share.
  int sample_zone(int region, SplitRng& r) const {
    std::vector<double> weights;
    std::vector<int> idx;
    for (std::size_t z = 0; z < fleet.zones.size(); ++z) {
      if (fleet.zones[z].region != region) continue;
      weights.push_back(fleet.zones[z].traffic_weight);
      idx.push_back(static_cast<int>(z));
    }
    if (idx.empty()) return -1;
    return idx[r.weighted(weights)];
  }

  /// Effective failure class for orchestration: off-boarded services are
  /// handled like ActiveMigrate, never terminated.
  FailureClass effective_class(const ServiceEnvironment& env) const {
    FailureClass c = fleet.services[env.service].failure_class;
    if (env.offboarded &&
        (c == FailureClass::RestoreLater || c == FailureClass::Terminate))
      return FailureClass::ActiveMigrate;
    return c;
  }

  /// Refreshes modeled demand and host consumption from routed traffic.
  /// Demand per env and region is coeff * required_cores * routed_share,
  /// spread over the region's serving grants and capped at each grant.
  void update_consumption() {
    for (int r = 0; r < 2; ++r)
      env_demand_by_region[r].assign(fleet.envs.size(), 0.0);
    for (auto& h : fleet.hosts) h.consumed_cores = 0.0;

    double share[2] = {routed_share(0), routed_share(1)};
    for (std::size_t ei = 0; ei < fleet.envs.size(); ++ei) {
      const auto& env = fleet.envs[ei];
      const Service& svc = fleet.services[env.service];
      double coeff = coeffs.of(svc.failure_class);
      double required = static_cast<double>(fleet.required_cores(env));
      for (int r = 0; r < 2; ++r)
        env_demand_by_region[r][ei] = coeff * required * share[r];
    }

    // Serving grants per env per region, then host-level spread.
    for (std::size_t ei = 0; ei < fleet.envs.size(); ++ei) {
      const auto& env = fleet.envs[ei];
      if (env.replica_sets.empty()) continue;
      const Service& svc = fleet.services[env.service];
      for (int r = 0; r < 2; ++r) {
        double granted = 0;
        for (const auto& rs : env.replica_sets)
          if (rs.serving && region_of_set(rs) == r)
            granted += rs.replicas * svc.cores_per_replica;
        if (granted <= 0) continue;
        double per_core = env_demand_by_region[r][ei] / granted;
        per_core = std::min(per_core, 1.0);
        for (const auto& rs : env.replica_sets) {
          if (!rs.serving || region_of_set(rs) != r) continue;
          fleet.hosts[rs.host].consumed_cores +=
              per_core * rs.replicas * svc.cores_per_replica;
        }
      }
    }

    service_serving.assign(fleet.services.size(), 0);
    for (const auto& env : fleet.envs)
      if (env.serving_replicas() > 0) service_serving[env.service] = 1;
  }

  int region_of_set(const ReplicaSet& rs) const { return fleet.region_of_host(rs.host); }

  GraphView graph_view(int zone) {
    GraphView v;
    v.fleet = &fleet;
    v.isolation = &isolation;
    v.service_serving = service_serving;
    v.zone = zone;
    v.now = kernel.now();
    v.ambient_error_rate = cfg.ambient_error_rate;
    return v;
  }

  /// Consumed cores of a service right now (all envs, all regions).
  double service_consumed_cores(int service) const {
    double sum = 0;
    for (std::size_t ei = 0; ei < fleet.envs.size(); ++ei) {
      if (fleet.envs[ei].service != service) continue;
      for (int r = 0; r < 2; ++r) {
        const auto& env = fleet.envs[ei];
        double granted = 0;
        for (const auto& rs : env.replica_sets)
          if (rs.serving && region_of_set(rs) == r)
            granted += rs.replicas * fleet.services[service].cores_per_replica;
        sum += std::min(env_demand_by_region[r][ei], granted);
      }
    }
    return sum;
  }

  /// Releases every replica set of an environment back to its hosts.
  void release_all_sets(int env_idx) {
    auto& env = fleet.envs[env_idx];
    for (const auto& rs : env.replica_sets) release_replica_set(fleet, env, rs);
    env.replica_sets.clear();
  }

  std::vector<int> hosts_of_kind(ClusterKind kind, int region = -1) const {
    std::vector<int> out;
    for (std::size_t h = 0; h < fleet.hosts.size(); ++h) {
      const Cluster& c = fleet.clusters[fleet.hosts[h].cluster];
      if (c.kind != kind) continue;
      if (region >= 0 && c.region != region) continue;
      if (fleet.hosts[h].stateless_cores <= 0 && fleet.hosts[h].overcommit_cores <= 0)
        continue;  // not yet converted / already released
      out.push_back(static_cast<int>(h));
    }
    return out;
  }

  void log_event(const std::string& kind, Json payload) {
    kernel.schedule(kernel.now(), kind, std::move(payload), nullptr);
  }
};

}  // namespace ufa
