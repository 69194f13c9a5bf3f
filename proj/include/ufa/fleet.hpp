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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ufa/core.hpp"

namespace ufa {

// ---------------------------------------------------------------------------
// Tiers and failure classes
// ---------------------------------------------------------------------------

/// Business-criticality tiers, T0 highest. NP is non-production; it ranks
/// below T5 for preemption purposes.
enum class Tier : int { T0 = 0, T1, T2, T3, T4, T5, NP };

inline constexpr int kTierCount = 7;
inline constexpr std::array<Tier, kTierCount> kAllTiers = {
    Tier::T0, Tier::T1, Tier::T2, Tier::T3, Tier::T4, Tier::T5, Tier::NP};

inline const char* tier_name(Tier t) {
  switch (t) {
    case Tier::T0: return "T0";
    case Tier::T1: return "T1";
    case Tier::T2: return "T2";
    case Tier::T3: return "T3";
    case Tier::T4: return "T4";
    case Tier::T5: return "T5";
    case Tier::NP: return "NP";
  }
  return "?";
}

inline Tier tier_from_name(const std::string& s) {
  for (Tier t : kAllTiers)
    if (s == tier_name(t)) return t;
  fail(ErrorCode::ConfigError, "unknown tier '" + s + "'");
}

/// Behavior of a service when its region fails over.
///   AlwaysOn      - never preempted; absorbs doubled traffic in place.
///   ActiveMigrate - relocated make-before-break; zero downtime.
///   RestoreLater  - terminated immediately, restored within a 1-hour RTO.
///   Terminate     - terminated for the whole failover, restored at failback.
enum class FailureClass : int { AlwaysOn = 0, ActiveMigrate, RestoreLater, Terminate };

inline constexpr std::array<FailureClass, 4> kAllClasses = {
    FailureClass::AlwaysOn, FailureClass::ActiveMigrate, FailureClass::RestoreLater,
    FailureClass::Terminate};

inline const char* failure_class_name(FailureClass c) {
  switch (c) {
    case FailureClass::AlwaysOn: return "AlwaysOn";
    case FailureClass::ActiveMigrate: return "ActiveMigrate";
    case FailureClass::RestoreLater: return "RestoreLater";
    case FailureClass::Terminate: return "Terminate";
  }
  return "?";
}

inline FailureClass failure_class_from_name(const std::string& s) {
  for (FailureClass c : kAllClasses)
    if (s == failure_class_name(c)) return c;
  fail(ErrorCode::ConfigError, "unknown failure class '" + s + "'");
}

/// Recovery time objective per class. AlwaysOn and ActiveMigrate recover in
/// seconds, RestoreLater within one hour, Terminate only after failback.
inline std::optional<SimTime> class_rto(FailureClass c) {
  switch (c) {
    case FailureClass::AlwaysOn: return SimTime::seconds(5);
    case FailureClass::ActiveMigrate: return SimTime::seconds(30);
    case FailureClass::RestoreLater: return SimTime::hours(1);
    case FailureClass::Terminate: return std::nullopt;
  }
  return std::nullopt;
}

/// Default tier-to-class mapping: T0/T1 AlwaysOn, T2 ActiveMigrate,
/// T3-T5 RestoreLater, NP Terminate. Scenario configs may override per
/// service.
inline FailureClass default_class_for_tier(Tier t) {
  switch (t) {
    case Tier::T0:
    case Tier::T1: return FailureClass::AlwaysOn;
    case Tier::T2: return FailureClass::ActiveMigrate;
    case Tier::T3:
    case Tier::T4:
    case Tier::T5: return FailureClass::RestoreLater;
    case Tier::NP: return FailureClass::Terminate;
  }
  return FailureClass::Terminate;
}

// ---------------------------------------------------------------------------
// Dependency graph
// ---------------------------------------------------------------------------

enum class EdgeSemantics : int { FailOpen = 0, FailClose, Indeterminate };

inline const char* edge_semantics_name(EdgeSemantics s) {
  switch (s) {
    case EdgeSemantics::FailOpen: return "FailOpen";
    case EdgeSemantics::FailClose: return "FailClose";
    case EdgeSemantics::Indeterminate: return "Indeterminate";
  }
  return "?";
}

inline EdgeSemantics edge_semantics_from_name(const std::string& s) {
  if (s == "FailOpen") return EdgeSemantics::FailOpen;
  if (s == "FailClose") return EdgeSemantics::FailClose;
  if (s == "Indeterminate") return EdgeSemantics::Indeterminate;
  fail(ErrorCode::ConfigError, "unknown edge semantics '" + s + "'");
}

/// Caller -> callee endpoint edge. ground_truth drives simulated behavior;
/// classifiers only ever see traces, never this field.
struct DependencyEdge {
  int caller = -1;  // service index
  int caller_endpoint = 0;
  int callee = -1;  // service index
  int callee_endpoint = 0;
  EdgeSemantics ground_truth = EdgeSemantics::FailOpen;
  /// A fail-close caller errors on a blocked callee only once the blocked
  /// fraction reaches this level (models callers that ride out partial
  /// outages on caches or fallbacks). 0 means any blockage propagates.
  double failure_activation_fraction = 0.0;
};

// ---------------------------------------------------------------------------
// Services and environments
// ---------------------------------------------------------------------------

struct Service {
  std::string id;
  Tier tier = Tier::T3;
  FailureClass failure_class = FailureClass::RestoreLater;
  int endpoints = 1;
  int cores_per_replica = 2;
  double mem_per_core_gb = 4.0;  // M_s
  SimTime base_startup = SimTime::seconds(90);
  bool special_hardware = false;
  bool deny_listed = false;
  SimTime created_at{0};
  std::vector<int> out_edges;  // indices into Fleet::edges
};

enum class EnvKind : int { Production = 0, Canary, Staging, Shadow };

inline const char* env_kind_name(EnvKind k) {
  switch (k) {
    case EnvKind::Production: return "production";
    case EnvKind::Canary: return "canary";
    case EnvKind::Staging: return "staging";
    case EnvKind::Shadow: return "shadow";
  }
  return "?";
}

inline EnvKind env_kind_from_name(const std::string& s) {
  if (s == "production") return EnvKind::Production;
  if (s == "canary") return EnvKind::Canary;
  if (s == "staging") return EnvKind::Staging;
  if (s == "shadow") return EnvKind::Shadow;
  fail(ErrorCode::ConfigError, "unknown env kind '" + s + "'");
}

enum class Lifecycle : int { Serving = 0, Locked, Disabled, Terminated, Bursted, Restoring };

inline const char* lifecycle_name(Lifecycle l) {
  switch (l) {
    case Lifecycle::Serving: return "Serving";
    case Lifecycle::Locked: return "Locked";
    case Lifecycle::Disabled: return "Disabled";
    case Lifecycle::Terminated: return "Terminated";
    case Lifecycle::Bursted: return "Bursted";
    case Lifecycle::Restoring: return "Restoring";
  }
  return "?";
}

enum class Pool : int { Stateless = 0, Overcommit };

inline const char* pool_name(Pool p) {
  return p == Pool::Stateless ? "stateless" : "overcommit";
}

/// A block of replicas of one environment granted on one host.
struct ReplicaSet {
  int host = -1;
  Pool pool = Pool::Stateless;
  int replicas = 0;
  bool serving = false;  // false while starting up
};

struct ServiceEnvironment {
  std::string id;
  int service = -1;
  EnvKind kind = EnvKind::Production;
  /// Replicas needed to carry global steady traffic at 1x.
  int required_replicas = 1;
  Lifecycle lifecycle = Lifecycle::Serving;
  std::vector<ReplicaSet> replica_sets;
  bool locked = false;
  bool offboarded = false;      // excluded from termination and isolation
  bool ufa_eligible = true;     // reconciliation result
  std::optional<SimTime> terminated_at;
  std::optional<SimTime> restored_at;

  int serving_replicas() const {
    int n = 0;
    for (const auto& rs : replica_sets)
      if (rs.serving) n += rs.replicas;
    return n;
  }

  int placed_replicas() const {
    int n = 0;
    for (const auto& rs : replica_sets) n += rs.replicas;
    return n;
  }
};

// ---------------------------------------------------------------------------
// Capacity topology
// ---------------------------------------------------------------------------

struct Host {
  std::string id;
  int zone = -1;
  int cluster = -1;
  int physical_cores = 64;
  double mem_per_core_gb = 8.0;  // M_h
  int stateless_cores = 64;
  int overcommit_cores = 0;
  // Allocation bookkeeping, maintained by the scheduler.
  int used_stateless = 0;
  int used_overcommit = 0;
  double used_mem_gb = 0.0;
  // Modeled consumption, refreshed each tick by the runner.
  double consumed_cores = 0.0;

  int free_pool(Pool p) const {
    return p == Pool::Stateless ? stateless_cores - used_stateless
                                : overcommit_cores - used_overcommit;
  }
  double utilization() const {
    return physical_cores > 0 ? consumed_cores / physical_cores : 0.0;
  }
};

enum class ClusterKind : int { SteadyState = 0, Batch, Burst, Cloud };

inline const char* cluster_kind_name(ClusterKind k) {
  switch (k) {
    case ClusterKind::SteadyState: return "steady";
    case ClusterKind::Batch: return "batch";
    case ClusterKind::Burst: return "burst";
    case ClusterKind::Cloud: return "cloud";
  }
  return "?";
}

struct BatchJob {
  std::string id;
  int cores = 0;
  bool preemptible = true;
  SimTime restart_cost = SimTime::minutes(10);
  bool evicted = false;
};

struct Cluster {
  std::string id;
  ClusterKind kind = ClusterKind::SteadyState;
  int region = -1;
  std::vector<int> hosts;
  std::vector<BatchJob> batch_jobs;  // batch clusters only
};

struct Zone {
  std::string id;
  int region = -1;
  bool canary = false;
  double traffic_weight = 0.0;  // share of regional traffic landing here
};

struct City {
  std::string id;
  int primary_region = 0;
  double traffic_rps = 0.0;  // steady request rate attributed to the city
};

// ---------------------------------------------------------------------------
// Fleet
// ---------------------------------------------------------------------------

struct Fleet {
  std::vector<std::string> regions;  // exactly two
  std::vector<Zone> zones;
  std::vector<Cluster> clusters;
  std::vector<Host> hosts;
  std::vector<Service> services;
  std::vector<ServiceEnvironment> envs;
  std::vector<DependencyEdge> edges;
  std::vector<City> cities;

  int region_of_host(int host) const { return clusters[hosts[host].cluster].region; }

  int find_service(const std::string& id) const {
    for (std::size_t i = 0; i < services.size(); ++i)
      if (services[i].id == id) return static_cast<int>(i);
    return -1;
  }

  int find_env(const std::string& id) const {
    for (std::size_t i = 0; i < envs.size(); ++i)
      if (envs[i].id == id) return static_cast<int>(i);
    return -1;
  }

  /// Production-facing environments of a service (first match).
  int env_of_service(int service) const {
    for (std::size_t i = 0; i < envs.size(); ++i)
      if (envs[i].service == service) return static_cast<int>(i);
    return -1;
  }

  int required_cores(const ServiceEnvironment& env) const {
    return env.required_replicas * services[env.service].cores_per_replica;
  }

  int serving_cores(const ServiceEnvironment& env) const {
    return env.serving_replicas() * services[env.service].cores_per_replica;
  }

  int granted_cores_in_region(const ServiceEnvironment& env, int region,
                              bool serving_only = true) const {
    int total = 0;
    for (const auto& rs : env.replica_sets) {
      if (serving_only && !rs.serving) continue;
      if (region_of_host(rs.host) == region)
        total += rs.replicas * services[env.service].cores_per_replica;
    }
    return total;
  }

  /// True tier inversion: a caller that survives failover depending on a
  /// callee that is preempted.
  bool tier_inverted(const DependencyEdge& e) const {
    FailureClass cal = services[e.caller].failure_class;
    FailureClass cee = services[e.callee].failure_class;
    bool caller_critical =
        cal == FailureClass::AlwaysOn || cal == FailureClass::ActiveMigrate;
    bool callee_preempted =
        cee == FailureClass::RestoreLater || cee == FailureClass::Terminate;
    return caller_critical && callee_preempted;
  }
};

}  // namespace ufa
