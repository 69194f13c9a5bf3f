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
#include <optional>
#include <string>
#include <vector>

#include "ufa/fleet.hpp"
#include "ufa/overcommit.hpp"

namespace ufa {

struct PlacementRequest {
  int env = -1;
  Pool pool = Pool::Stateless;
  int replicas = 1;
  int cores_per_replica = 1;
  double mem_per_replica_gb = 4.0;
};

/// One replica block landed on a host.
struct Placement {
  int request_index = -1;
  int host = -1;
  int replicas = 0;
};

struct UnplacedRemainder {
  int request_index = -1;
  int replicas = 0;
};

struct ScheduleResult {
  std::vector<Placement> placed;
  std::vector<UnplacedRemainder> unplaced;

  bool fully_placed() const { return unplaced.empty(); }
};

namespace detail {

struct HostState {
  int index = -1;
  int free_stateless = 0;
  int free_overcommit = 0;
  double free_mem_gb = 0.0;
  double utilization = 0.0;

  int free_pool(Pool p) const {
    return p == Pool::Stateless ? free_stateless : free_overcommit;
  }
  void take(Pool p, int cores, double mem) {
    if (p == Pool::Stateless)
      free_stateless -= cores;
    else
      free_overcommit -= cores;
    free_mem_gb -= mem;
  }
};

}  // namespace detail

/// Deterministic two-pool placement. Each replica goes to the feasible host
/// with the fewest remaining cores in the requested pool (best fit); ties are
/// broken by lower current utilization, then host index. A replica is
/// feasible on a host only if the pool has room for its cores and the memory
/// grant stays under the alpha_m cap. Shortfall is reported, not thrown.
inline ScheduleResult schedule_requests(const std::vector<PlacementRequest>& requests,
                                        std::vector<detail::HostState>& hosts) {
  ScheduleResult result;
  for (std::size_t ri = 0; ri < requests.size(); ++ri) {
    const auto& req = requests[ri];
    int remaining = req.replicas;
    // Accumulate per-host counts for this request so the result stays small.
    std::vector<int> landed(hosts.size(), 0);
    while (remaining > 0) {
      int best = -1;
      for (std::size_t hi = 0; hi < hosts.size(); ++hi) {
        const auto& h = hosts[hi];
        if (h.free_pool(req.pool) < req.cores_per_replica) continue;
        if (h.free_mem_gb + 1e-9 < req.mem_per_replica_gb) continue;
        if (best < 0) {
          best = static_cast<int>(hi);
          continue;
        }
        const auto& b = hosts[best];
        int hf = h.free_pool(req.pool), bf = b.free_pool(req.pool);
        if (hf != bf ? hf < bf
                     : (h.utilization != b.utilization ? h.utilization < b.utilization
                                                       : h.index < b.index))
          best = static_cast<int>(hi);
      }
      if (best < 0) break;
      hosts[best].take(req.pool, req.cores_per_replica, req.mem_per_replica_gb);
      ++landed[best];
      --remaining;
    }
    for (std::size_t hi = 0; hi < hosts.size(); ++hi)
      if (landed[hi] > 0)
        result.placed.push_back(
            {static_cast<int>(ri), hosts[hi].index, landed[hi]});
    if (remaining > 0) result.unplaced.push_back({static_cast<int>(ri), remaining});
  }
  return result;
}

inline std::vector<detail::HostState> host_states(const Fleet& fleet,
                                                  const std::vector<int>& host_indices,
                                                  double alpha_mem) {
  std::vector<detail::HostState> states;
  states.reserve(host_indices.size());
  for (int hi : host_indices) {
    const Host& h = fleet.hosts[hi];
    detail::HostState s;
    s.index = hi;
    s.free_stateless = h.stateless_cores - h.used_stateless;
    s.free_overcommit = h.overcommit_cores - h.used_overcommit;
    s.free_mem_gb = alpha_mem * h.physical_cores * h.mem_per_core_gb - h.used_mem_gb;
    s.utilization = h.utilization();
    states.push_back(s);
  }
  return states;
}

/// Places requests onto the given hosts and, when apply is set, commits the
/// grants into the fleet as replica sets (serving state is the caller's
/// business).
inline ScheduleResult schedule(Fleet& fleet, const std::vector<PlacementRequest>& requests,
                               const std::vector<int>& host_indices, double alpha_mem,
                               bool apply, bool serving = true) {
  auto states = host_states(fleet, host_indices, alpha_mem);
  ScheduleResult result = schedule_requests(requests, states);
  if (!apply) return result;
  for (const auto& p : result.placed) {
    const auto& req = requests[p.request_index];
    Host& h = fleet.hosts[p.host];
    int cores = p.replicas * req.cores_per_replica;
    if (req.pool == Pool::Stateless)
      h.used_stateless += cores;
    else
      h.used_overcommit += cores;
    h.used_mem_gb += p.replicas * req.mem_per_replica_gb;
    if (req.env >= 0) {
      ReplicaSet rs;
      rs.host = p.host;
      rs.pool = req.pool;
      rs.replicas = p.replicas;
      rs.serving = serving;
      fleet.envs[req.env].replica_sets.push_back(rs);
    }
  }
  return result;
}

/// Releases one replica set's grant from its host.
inline void release_replica_set(Fleet& fleet, const ServiceEnvironment& env,
                                const ReplicaSet& rs) {
  Host& h = fleet.hosts[rs.host];
  int cores = rs.replicas * fleet.services[env.service].cores_per_replica;
  if (rs.pool == Pool::Stateless)
    h.used_stateless -= cores;
  else
    h.used_overcommit -= cores;
  h.used_mem_gb -= rs.replicas * fleet.services[env.service].cores_per_replica *
                   fleet.services[env.service].mem_per_core_gb;
}

/// Standalone workload description for factor searches: replica blocks that
/// must all land in the overcommit pool.
struct OvercommitWorkload {
  struct Item {
    int replicas = 0;
    int cores_per_replica = 1;
    double mem_per_replica_gb = 0.0;
  };
  std::vector<Item> items;

  long total_cores() const {
    long c = 0;
    for (const auto& it : items) c += static_cast<long>(it.replicas) * it.cores_per_replica;
    return c;
  }
};

struct FactorHostPool {
  int hosts = 0;
  int physical_cores_per_host = 0;
  double mem_per_core_gb = 8.0;
  double alpha_mem = 0.75;
};

inline bool factor_feasible(const OvercommitWorkload& workload, const FactorHostPool& pool,
                            double factor) {
  std::vector<detail::HostState> states(pool.hosts);
  PoolAdvertisement adv = advertise_pools(pool.physical_cores_per_host, factor);
  for (int i = 0; i < pool.hosts; ++i) {
    states[i].index = i;
    states[i].free_stateless = adv.stateless_cores;
    states[i].free_overcommit = adv.overcommit_cores;
    states[i].free_mem_gb =
        pool.alpha_mem * pool.physical_cores_per_host * pool.mem_per_core_gb;
  }
  std::vector<PlacementRequest> requests;
  requests.reserve(workload.items.size());
  for (const auto& it : workload.items) {
    PlacementRequest r;
    r.pool = Pool::Overcommit;
    r.replicas = it.replicas;
    r.cores_per_replica = it.cores_per_replica;
    r.mem_per_replica_gb = it.mem_per_replica_gb;
    requests.push_back(r);
  }
  return schedule_requests(requests, states).fully_placed();
}

/// Smallest overcommit factor (0.01 granularity) at which the whole workload
/// packs into the overcommit pools, found by binary search up to the memory
/// ceiling. Throws Unsatisfiable when even the ceiling cannot place it.
inline double min_safe_factor(const OvercommitWorkload& workload, const FactorHostPool& pool,
                              const OvercommitParams& params) {
  const double ceiling = max_overcommit(params);
  // Work in integer hundredths so the search grid is exact.
  long lo = 100;
  long hi = static_cast<long>(std::floor(ceiling * 100.0 + 1e-9));
  if (!factor_feasible(workload, pool, static_cast<double>(hi) / 100.0))
    fail(ErrorCode::Unsatisfiable, "workload does not fit even at the overcommit ceiling");
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    if (factor_feasible(workload, pool, static_cast<double>(mid) / 100.0))
      hi = mid;
    else
      lo = mid + 1;
  }
  return static_cast<double>(hi) / 100.0;
}

}  // namespace ufa
