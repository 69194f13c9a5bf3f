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
#include <string>
#include <vector>

#include "ufa/core.hpp"
#include "ufa/fleet.hpp"

namespace ufa {

/// Cloud capacity source. Quotas are hard caps for the duration of a run;
/// raising them is a days-long process that no failover can wait for.
struct CloudProvider {
  struct ZoneQuota {
    std::string zone;
    long quota_cores = 0;
    long provisioned_cores = 0;
  };
  std::vector<ZoneQuota> zones;
  SimTime provisioning_latency = SimTime::minutes(10);

  long total_quota() const {
    long q = 0;
    for (const auto& z : zones) q += z.quota_cores;
    return q;
  }
  long total_provisioned() const {
    long p = 0;
    for (const auto& z : zones) p += z.provisioned_cores;
    return p;
  }
  long remaining_quota() const { return total_quota() - total_provisioned(); }
};

struct CloudTranche {
  std::string zone;
  long cores = 0;
  SimTime available_at;
};

struct CloudProvisionPlan {
  std::vector<CloudTranche> tranches;
  long provisioned = 0;
  long quota_exhausted = 0;  // uncovered remainder
};

/// Greedy allocation across zones by remaining quota (largest first, stable
/// by declaration order). Each zone's tranche becomes schedulable after the
/// provider latency. Never exceeds per-zone or total quota; the uncovered
/// remainder is reported as quota_exhausted.
inline CloudProvisionPlan plan_cloud_provision(CloudProvider& provider, long shortfall_cores,
                                               SimTime now) {
  if (shortfall_cores <= 0)
    fail(ErrorCode::ConfigError, "cloud provisioning needs a positive shortfall");
  CloudProvisionPlan plan;
  std::vector<std::size_t> order(provider.zones.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    long ra = provider.zones[a].quota_cores - provider.zones[a].provisioned_cores;
    long rb = provider.zones[b].quota_cores - provider.zones[b].provisioned_cores;
    return ra > rb;
  });
  long remaining = shortfall_cores;
  for (std::size_t idx : order) {
    if (remaining <= 0) break;
    auto& z = provider.zones[idx];
    long avail = z.quota_cores - z.provisioned_cores;
    if (avail <= 0) continue;
    long take = std::min(avail, remaining);
    z.provisioned_cores += take;
    plan.tranches.push_back({z.zone, take, now + provider.provisioning_latency});
    plan.provisioned += take;
    remaining -= take;
  }
  plan.quota_exhausted = remaining;
  return plan;
}

/// Tears down cloud capacity at failback. Every cloud host must be drained
/// first; releasing under live replicas is refused.
inline void release_cloud(Fleet& fleet, CloudProvider& provider) {
  for (std::size_t ci = 0; ci < fleet.clusters.size(); ++ci) {
    Cluster& cluster = fleet.clusters[ci];
    if (cluster.kind != ClusterKind::Cloud) continue;
    for (int hi : cluster.hosts)
      if (fleet.hosts[hi].used_stateless > 0 || fleet.hosts[hi].used_overcommit > 0)
        fail(ErrorCode::DrainBlocked,
             "replicas still serving on cloud host " + fleet.hosts[hi].id);
    // Zero the host capacity rather than erase, to keep indices stable.
    for (int hi : cluster.hosts) {
      fleet.hosts[hi].stateless_cores = 0;
      fleet.hosts[hi].overcommit_cores = 0;
      fleet.hosts[hi].physical_cores = 0;
    }
    cluster.hosts.clear();
  }
  for (auto& z : provider.zones) z.provisioned_cores = 0;
}

}  // namespace ufa
