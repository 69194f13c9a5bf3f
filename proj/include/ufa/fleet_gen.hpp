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
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "ufa/capacity.hpp"
#include "ufa/fleet.hpp"
#include "ufa/overcommit.hpp"
#include "ufa/rng.hpp"
#include "ufa/scheduler.hpp"
#include "ufa/violations.hpp"

namespace ufa {

// ---------------------------------------------------------------------------
// Reference statistics the synthetic generator is calibrated against
// ---------------------------------------------------------------------------

/// Weekly cross-tier RPC volume, in billions of requests, caller tier by
/// callee tier.
inline const std::array<std::array<double, kTierCount>, kTierCount>& cross_tier_call_volume() {
  static const std::array<std::array<double, kTierCount>, kTierCount> v = {{
      {47.1, 940.0, 2300.0, 1820.0, 144.0, 100.0, 1770.0},       // T0 callers
      {10.7, 21800.0, 2240.0, 387.0, 6.07, 70.4, 18600.0},       // T1
      {25.3, 2020.0, 663.0, 77.0, 0.0309, 1.17, 2700.0},         // T2
      {7.95, 288.0, 119.0, 16.9, 0.192, 6.09, 1060.0},           // T3
      {0.788, 11.5, 0.599, 0.228, 1.19, 0.0121, 22.1},           // T4
      {0.290, 76.1, 0.266, 0.849, 0.0013, 4.52, 14.1},           // T5
      {107.0, 1530.0, 471.0, 126.0, 12.8, 18.3, 3130.0},         // NP
  }};
  return v;
}

inline double cross_tier_total_volume() {
  double total = 0;
  for (const auto& row : cross_tier_call_volume())
    for (double c : row) total += c;
  return total;
}

struct EndpointStats {
  int p50 = 2;
  int p90 = 20;
  int max = 100;
};

inline const std::array<EndpointStats, kTierCount>& endpoint_stats_by_tier() {
  static const std::array<EndpointStats, kTierCount> s = {{
      {7, 79, 153},    // T0
      {10, 96, 1416},  // T1
      {11, 82, 629},   // T2
      {3, 38, 1059},   // T3
      {2, 22, 116},    // T4
      {2, 13, 1953},   // T5
      {1, 18, 1594},   // NP
  }};
  return s;
}

/// Relative weight of fail-close inversions per category, shaped like the
/// findings split between the three buckets.
inline double inversion_category_weight(ViolationCategory c);

// ---------------------------------------------------------------------------
// Generator profile
// ---------------------------------------------------------------------------

struct TierSpec {
  double core_budget = 0.0;  // cores at scale 1.0
  int services = 0;
  /// Fraction of this tier's services re-classed ActiveMigrate (selective
  /// oversubscription of a normally AlwaysOn tier).
  double activemigrate_fraction = 0.0;
};

struct FleetProfile {
  std::map<Tier, TierSpec> tiers;
  int min_replicas = 2;
  std::array<int, 4> replica_core_options = {1, 2, 4, 8};
  std::array<double, 4> replica_core_weights = {0.15, 0.35, 0.35, 0.15};
  double service_mem_per_core_gb = 4.0;  // M_s
  double host_mem_per_core_gb = 8.0;     // M_h
  int host_cores = 64;
  double overcommit_factor = 1.5;
  double alpha_mem = 0.75;
  int zones_per_region = 3;
  double canary_traffic_share = 0.02;
  int cities = 50;
  double city_rps_mean = 0.3;
  /// Batch-cluster size per region, as a fraction of the total scaled demand.
  double batch_cores_fraction = 0.66;
  double batch_preemptible_fraction = 0.8;
  /// Probability that a tier-inverted edge is fail-close, before category
  /// shaping. Zero yields a fully remediated fleet.
  double inversion_failclose_rate = 0.0;
  double benign_failclose_rate = 0.30;
  double gpu_fraction = 0.0;
  double host_slack = 0.03;  // spare stateless capacity beyond computed need

  void validate() const {
    if (tiers.empty()) fail(ErrorCode::InvalidProfile, "profile has no tiers");
    for (const auto& [t, spec] : tiers) {
      if (spec.core_budget < 0)
        fail(ErrorCode::InvalidProfile,
             std::string("negative core budget for tier ") + tier_name(t));
      if (spec.services < 0)
        fail(ErrorCode::InvalidProfile, "negative service count");
    }
    if (min_replicas < 1) fail(ErrorCode::InvalidProfile, "min_replicas must be >= 1");
  }
};

/// Tier core budgets and desk-scale service counts proportioned like a large
/// production fleet: T1 dominates cores, non-production dominates service
/// count. Budgets are quoted at scale 1.0; pass scale to shrink.
inline FleetProfile reference_profile() {
  FleetProfile p;
  p.tiers[Tier::T0] = {201'000.0, 8, 0.0};
  p.tiers[Tier::T1] = {3'030'000.0, 48, 0.0};
  p.tiers[Tier::T2] = {400'000.0, 36, 0.0};
  p.tiers[Tier::T3] = {254'000.0, 40, 0.0};
  p.tiers[Tier::T4] = {23'100.0, 12, 0.0};
  p.tiers[Tier::T5] = {22'100.0, 20, 0.0};
  p.tiers[Tier::NP] = {249'000.0, 36, 0.0};
  return p;
}

/// Later-rollout shape: part of T1 is selectively oversubscribed as
/// ActiveMigrate, which is what brings the capacity ratio to the 1.3x goal.
inline FleetProfile phase2_profile() {
  FleetProfile p = reference_profile();
  p.tiers[Tier::T1].activemigrate_fraction = 0.47;
  return p;
}

inline double inversion_category_weight(ViolationCategory c) {
  switch (c) {
    case ViolationCategory::AlwaysOnToRestoreLater: return 0.575;
    case ViolationCategory::ActiveMigrateToRestoreLater: return 1.0;
    case ViolationCategory::AnyToTerminate: return 0.065;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

namespace detail {

inline int sample_endpoints(const EndpointStats& st, SplitRng& rng) {
  double u = rng.next_double();
  if (u < 0.5) return static_cast<int>(rng.uniform_int(1, std::max(1, st.p50)));
  if (u < 0.9) return static_cast<int>(rng.uniform_int(st.p50, std::max(st.p50, st.p90)));
  double v = rng.next_double();
  int span = std::max(0, st.max - st.p90);
  return st.p90 + static_cast<int>(v * v * span);
}

inline int sample_cores_per_replica(const FleetProfile& p, SplitRng& rng) {
  std::size_t i = rng.weighted(std::span<const double>(p.replica_core_weights.data(), 4));
  return p.replica_core_options[i];
}

}  // namespace detail

/// Generates a two-region synthetic fleet. Deterministic for a fixed
/// (seed, scale, profile); per-tier core totals track scale x budget within
/// one replica's worth of rounding per service.
inline Fleet generate_fleet(std::uint64_t seed, double scale, const FleetProfile& profile) {
  profile.validate();
  if (!(scale > 0.0 && scale <= 1.0))
    fail(ErrorCode::InvalidProfile, "scale must be in (0, 1]");

  Fleet fleet;
  fleet.regions = {"region-a", "region-b"};
  SplitRng rng = SplitRng(seed).split("fleet-gen");

  // Zones: one canary zone per region carrying a 2% traffic share.
  for (int r = 0; r < 2; ++r) {
    for (int z = 0; z < profile.zones_per_region; ++z) {
      Zone zone;
      zone.region = r;
      zone.canary = (z == 0);
      zone.id = fleet.regions[r] + "-z" + std::to_string(z);
      zone.traffic_weight =
          zone.canary ? profile.canary_traffic_share
                      : (1.0 - profile.canary_traffic_share) /
                            std::max(1, profile.zones_per_region - 1);
      fleet.zones.push_back(zone);
    }
  }

  // Services, tier by tier.
  SplitRng svc_rng = rng.split("services");
  for (Tier tier : kAllTiers) {
    auto it = profile.tiers.find(tier);
    if (it == profile.tiers.end() || it->second.services == 0) continue;
    const TierSpec& spec = it->second;
    double budget = spec.core_budget * scale;

    // Random demand shares, then whole-replica apportionment against the
    // tier budget.
    std::vector<double> shares(spec.services);
    for (auto& s : shares) s = 0.25 + svc_rng.next_double();
    double share_sum = std::accumulate(shares.begin(), shares.end(), 0.0);

    std::vector<int> cpr(spec.services);
    std::vector<int> replicas(spec.services);
    long tier_cores = 0;
    for (int i = 0; i < spec.services; ++i) {
      cpr[i] = detail::sample_cores_per_replica(profile, svc_rng);
      double target = budget * shares[i] / share_sum;
      replicas[i] = std::max<int>(profile.min_replicas,
                                  static_cast<int>(std::llround(target / cpr[i])));
      tier_cores += static_cast<long>(replicas[i]) * cpr[i];
    }
    // Nudge totals toward the budget, one replica at a time.
    for (int guard = 0; guard < 10'000; ++guard) {
      long diff = tier_cores - static_cast<long>(std::llround(budget));
      if (std::abs(diff) <= *std::min_element(cpr.begin(), cpr.end())) break;
      if (diff > 0) {
        int pick = -1;
        for (int i = 0; i < spec.services; ++i)
          if (replicas[i] > profile.min_replicas && (pick < 0 || cpr[i] > cpr[pick])) pick = i;
        if (pick < 0) break;
        --replicas[pick];
        tier_cores -= cpr[pick];
      } else {
        int pick = 0;
        for (int i = 0; i < spec.services; ++i)
          if (cpr[i] < cpr[pick]) pick = i;
        ++replicas[pick];
        tier_cores += cpr[pick];
      }
    }

    for (int i = 0; i < spec.services; ++i) {
      Service svc;
      svc.id = std::string(tier_name(tier)) + "-svc-" + std::to_string(i);
      svc.tier = tier;
      svc.failure_class = default_class_for_tier(tier);
      if (spec.activemigrate_fraction > 0 && svc_rng.bernoulli(spec.activemigrate_fraction))
        svc.failure_class = FailureClass::ActiveMigrate;
      svc.endpoints = detail::sample_endpoints(endpoint_stats_by_tier()[static_cast<int>(tier)],
                                               svc_rng);
      svc.cores_per_replica = cpr[i];
      svc.mem_per_core_gb = profile.service_mem_per_core_gb;
      svc.base_startup = SimTime::seconds(svc_rng.uniform_int(60, 180));
      svc.special_hardware = profile.gpu_fraction > 0 && svc_rng.bernoulli(profile.gpu_fraction);
      fleet.services.push_back(svc);

      ServiceEnvironment env;
      env.id = svc.id + "/" + (tier == Tier::NP ? "staging" : "production");
      env.service = static_cast<int>(fleet.services.size()) - 1;
      env.kind = tier == Tier::NP ? EnvKind::Staging : EnvKind::Production;
      env.required_replicas = replicas[i];
      fleet.envs.push_back(env);
    }
  }

  // Selective re-tiering aims at a core fraction; redo class draws against
  // cores so heavy services count proportionally. (The per-service draw above
  // seeds it; this pass corrects drift for skewed replica sizes.)
  for (Tier tier : kAllTiers) {
    auto it = profile.tiers.find(tier);
    if (it == profile.tiers.end() || it->second.activemigrate_fraction <= 0) continue;
    double want = it->second.activemigrate_fraction;
    long tier_total = 0, am_total = 0;
    std::vector<int> members;
    for (const auto& env : fleet.envs) {
      const Service& svc = fleet.services[env.service];
      if (svc.tier != tier) continue;
      long cores = static_cast<long>(env.required_replicas) * svc.cores_per_replica;
      tier_total += cores;
      if (svc.failure_class == FailureClass::ActiveMigrate) am_total += cores;
      members.push_back(env.service);
    }
    if (tier_total == 0) continue;
    // Flip services until the ActiveMigrate core share brackets the target.
    for (int svc_idx : members) {
      double frac = static_cast<double>(am_total) / static_cast<double>(tier_total);
      if (std::abs(frac - want) < 0.02) break;
      Service& svc = fleet.services[svc_idx];
      int env_idx = fleet.env_of_service(svc_idx);
      long cores =
          static_cast<long>(fleet.envs[env_idx].required_replicas) * svc.cores_per_replica;
      if (frac < want && svc.failure_class == default_class_for_tier(tier) &&
          svc.failure_class != FailureClass::ActiveMigrate) {
        svc.failure_class = FailureClass::ActiveMigrate;
        am_total += cores;
      } else if (frac > want && svc.failure_class == FailureClass::ActiveMigrate) {
        svc.failure_class = default_class_for_tier(tier);
        am_total -= cores;
      }
    }
  }

  // Dependency edges. A random topological rank keeps the graph acyclic while
  // cross-tier targeting follows the call-volume matrix.
  SplitRng edge_rng = rng.split("edges");
  const auto& volume = cross_tier_call_volume();
  std::vector<int> rank(fleet.services.size());
  std::iota(rank.begin(), rank.end(), 0);
  for (std::size_t i = rank.size(); i > 1; --i)
    std::swap(rank[i - 1], rank[edge_rng.uniform(i)]);
  std::vector<int> rank_of(fleet.services.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank_of[rank[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> by_tier(kTierCount);
  for (std::size_t i = 0; i < fleet.services.size(); ++i)
    by_tier[static_cast<int>(fleet.services[i].tier)].push_back(static_cast<int>(i));

  auto add_edge = [&](int caller, int callee) -> bool {
    if (caller == callee) return false;
    for (int ei : fleet.services[caller].out_edges)
      if (fleet.edges[ei].callee == callee) return false;
    DependencyEdge e;
    e.caller = caller;
    e.callee = callee;
    e.caller_endpoint =
        static_cast<int>(edge_rng.uniform(static_cast<std::uint64_t>(fleet.services[caller].endpoints)));
    e.callee_endpoint =
        static_cast<int>(edge_rng.uniform(static_cast<std::uint64_t>(fleet.services[callee].endpoints)));
    if (fleet.tier_inverted(e)) {
      FailureClass cal = fleet.services[caller].failure_class;
      FailureClass cee = fleet.services[callee].failure_class;
      double p = profile.inversion_failclose_rate *
                 inversion_category_weight(category_of(cal, cee));
      e.ground_truth = edge_rng.bernoulli(p) ? EdgeSemantics::FailClose : EdgeSemantics::FailOpen;
    } else {
      e.ground_truth = edge_rng.bernoulli(profile.benign_failclose_rate)
                           ? EdgeSemantics::FailClose
                           : EdgeSemantics::FailOpen;
    }
    fleet.edges.push_back(e);
    fleet.services[caller].out_edges.push_back(static_cast<int>(fleet.edges.size()) - 1);
    return true;
  };

  const double degree_weights[] = {0.05, 0.20, 0.30, 0.25, 0.15, 0.05};
  for (std::size_t caller = 0; caller < fleet.services.size(); ++caller) {
    int degree = static_cast<int>(edge_rng.weighted(degree_weights));
    int caller_tier = static_cast<int>(fleet.services[caller].tier);
    for (int d = 0; d < degree; ++d) {
      // Pick the callee tier from this caller tier's volume row, then a
      // concrete later-ranked service inside it.
      std::array<double, kTierCount> row = volume[caller_tier];
      std::size_t callee_tier = edge_rng.weighted(row);
      std::vector<int> candidates;
      for (int s : by_tier[callee_tier])
        if (rank_of[s] > rank_of[static_cast<int>(caller)]) candidates.push_back(s);
      if (candidates.empty()) continue;
      add_edge(static_cast<int>(caller), candidates[edge_rng.uniform(candidates.size())]);
    }
  }
  // Make sure every materially weighted tier pair has at least one edge, so
  // synthesized call matrices can reproduce the reference shares.
  double matrix_total = cross_tier_total_volume();
  for (int ci = 0; ci < kTierCount; ++ci) {
    for (int cj = 0; cj < kTierCount; ++cj) {
      if (volume[ci][cj] / matrix_total < 0.005) continue;
      bool found = false;
      for (const auto& e : fleet.edges)
        if (static_cast<int>(fleet.services[e.caller].tier) == ci &&
            static_cast<int>(fleet.services[e.callee].tier) == cj) {
          found = true;
          break;
        }
      if (found) continue;
      for (int a : by_tier[ci]) {
        for (int b : by_tier[cj]) {
          if (rank_of[b] > rank_of[a] && add_edge(a, b)) {
            found = true;
            break;
          }
        }
        if (found) break;
      }
    }
  }

  // Cities with a heavy-tailed traffic split, primaries alternating between
  // the two regions.
  double weight_sum = 0;
  std::vector<double> weights(profile.cities);
  for (int i = 0; i < profile.cities; ++i) {
    weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), 0.8);
    weight_sum += weights[i];
  }
  for (int i = 0; i < profile.cities; ++i) {
    City city;
    city.id = "city-" + std::to_string(i);
    city.primary_region = i % 2;
    city.traffic_rps =
        profile.city_rps_mean * profile.cities * weights[i] / weight_sum;
    fleet.cities.push_back(city);
  }

  return fleet;
}

// ---------------------------------------------------------------------------
// Host provisioning and steady-state placement
// ---------------------------------------------------------------------------

/// Builds hosts and batch clusters sized for the fleet under a placement
/// policy, then grants every environment its steady-state replicas.
/// Dedicated2x environments stand at full strength in both regions; others
/// split their replicas across the two regions.
inline ScheduleResult provision_and_place(Fleet& fleet, const PlacementPolicy& policy,
                                          const FleetProfile& profile) {
  // Capacity needs per region.
  double stateless_need = 0;  // per region
  double overcommit_need = 0;
  double demand_total = 0;
  for (const auto& env : fleet.envs) {
    const Service& svc = fleet.services[env.service];
    double cores = static_cast<double>(fleet.required_cores(env));
    demand_total += cores;
    switch (policy.of(svc.failure_class)) {
      case CapacityClass::Dedicated2x: stateless_need += cores; break;
      case CapacityClass::Dedicated1xBurst: stateless_need += cores / 2.0; break;
      case CapacityClass::OvercommitPool: overcommit_need += cores / 2.0; break;
    }
  }

  PoolAdvertisement adv = advertise_pools(profile.host_cores, profile.overcommit_factor);
  double oc_per_host = static_cast<double>(adv.overcommit_cores);
  int hosts_per_region = static_cast<int>(std::ceil(
      stateless_need * (1.0 + profile.host_slack) / profile.host_cores));
  if (oc_per_host > 0) {
    int for_overcommit = static_cast<int>(
        std::ceil(overcommit_need * (1.0 + profile.host_slack) / oc_per_host));
    hosts_per_region = std::max(hosts_per_region, for_overcommit);
  } else if (overcommit_need > 0) {
    fail(ErrorCode::InvalidProfile,
         "policy routes cores to the overcommit pool but the factor is 1.0");
  }
  hosts_per_region = std::max(hosts_per_region, 1);

  fleet.clusters.clear();
  fleet.hosts.clear();
  for (auto& env : fleet.envs) env.replica_sets.clear();

  for (int r = 0; r < 2; ++r) {
    Cluster cluster;
    cluster.id = fleet.regions[r] + "-steady";
    cluster.kind = ClusterKind::SteadyState;
    cluster.region = r;
    int cluster_idx = static_cast<int>(fleet.clusters.size());
    fleet.clusters.push_back(cluster);

    std::vector<int> zone_indices;
    for (std::size_t z = 0; z < fleet.zones.size(); ++z)
      if (fleet.zones[z].region == r) zone_indices.push_back(static_cast<int>(z));

    for (int h = 0; h < hosts_per_region; ++h) {
      Host host;
      host.id = fleet.regions[r] + "-host-" + std::to_string(h);
      host.cluster = cluster_idx;
      host.zone = zone_indices[h % zone_indices.size()];
      host.physical_cores = profile.host_cores;
      host.mem_per_core_gb = profile.host_mem_per_core_gb;
      host.stateless_cores = adv.stateless_cores;
      host.overcommit_cores = adv.overcommit_cores;
      fleet.hosts.push_back(host);
      fleet.clusters[cluster_idx].hosts.push_back(static_cast<int>(fleet.hosts.size()) - 1);
    }

    // Batch cluster alongside, sized relative to total demand.
    Cluster batch;
    batch.id = fleet.regions[r] + "-batch";
    batch.kind = ClusterKind::Batch;
    batch.region = r;
    int batch_idx = static_cast<int>(fleet.clusters.size());
    fleet.clusters.push_back(batch);
    int batch_cores = static_cast<int>(demand_total * profile.batch_cores_fraction);
    int batch_hosts = std::max(1, batch_cores / profile.host_cores);
    for (int h = 0; h < batch_hosts; ++h) {
      Host host;
      host.id = fleet.regions[r] + "-batch-host-" + std::to_string(h);
      host.cluster = batch_idx;
      host.zone = zone_indices[h % zone_indices.size()];
      host.physical_cores = profile.host_cores;
      host.mem_per_core_gb = profile.host_mem_per_core_gb;
      host.stateless_cores = profile.host_cores;
      host.overcommit_cores = 0;
      fleet.hosts.push_back(host);
      fleet.clusters[batch_idx].hosts.push_back(static_cast<int>(fleet.hosts.size()) - 1);
    }
    // Preemptible and pinned batch jobs fill the cluster.
    SplitRng job_rng = SplitRng(static_cast<std::uint64_t>(batch_hosts) * 2654435761u + r);
    int remaining = batch_hosts * profile.host_cores;
    int job_seq = 0;
    while (remaining > 0) {
      BatchJob job;
      job.id = batch.id + "-job-" + std::to_string(job_seq++);
      job.cores = static_cast<int>(std::min<std::int64_t>(remaining, job_rng.uniform_int(32, 256)));
      job.preemptible = job_rng.bernoulli(profile.batch_preemptible_fraction);
      job.restart_cost = SimTime::minutes(job_rng.uniform_int(5, 30));
      remaining -= job.cores;
      fleet.clusters[batch_idx].batch_jobs.push_back(job);
    }
  }

  // Steady-state placement, region by region.
  ScheduleResult combined;
  for (int r = 0; r < 2; ++r) {
    std::vector<PlacementRequest> requests;
    for (std::size_t ei = 0; ei < fleet.envs.size(); ++ei) {
      auto& env = fleet.envs[ei];
      const Service& svc = fleet.services[env.service];
      PlacementRequest req;
      req.env = static_cast<int>(ei);
      req.cores_per_replica = svc.cores_per_replica;
      req.mem_per_replica_gb = svc.cores_per_replica * svc.mem_per_core_gb;
      int first_half = (env.required_replicas + 1) / 2;
      switch (policy.of(svc.failure_class)) {
        case CapacityClass::Dedicated2x:
          req.pool = Pool::Stateless;
          req.replicas = env.required_replicas;
          break;
        case CapacityClass::Dedicated1xBurst:
          req.pool = Pool::Stateless;
          req.replicas = r == 0 ? first_half : env.required_replicas - first_half;
          break;
        case CapacityClass::OvercommitPool:
          req.pool = Pool::Overcommit;
          req.replicas = r == 0 ? first_half : env.required_replicas - first_half;
          break;
      }
      if (req.replicas > 0) requests.push_back(req);
    }
    std::vector<int> region_hosts;
    for (std::size_t h = 0; h < fleet.hosts.size(); ++h)
      if (fleet.region_of_host(static_cast<int>(h)) == r &&
          fleet.clusters[fleet.hosts[h].cluster].kind == ClusterKind::SteadyState)
        region_hosts.push_back(static_cast<int>(h));
    ScheduleResult res = schedule(fleet, requests, region_hosts, profile.alpha_mem,
                                  /*apply=*/true, /*serving=*/true);
    for (auto& u : res.unplaced) combined.unplaced.push_back(u);
    for (auto& p : res.placed) combined.placed.push_back(p);
  }
  return combined;
}

}  // namespace ufa
