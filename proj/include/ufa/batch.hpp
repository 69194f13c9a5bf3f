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
#include <cmath>
#include <vector>

#include "ufa/core.hpp"
#include "ufa/fleet.hpp"

namespace ufa {

struct SpawnerConfig {
  double conversion_rate_cores_per_min = 12'000.0;
  SimTime eviction_delay = SimTime::minutes(0);
  SimTime prefetch_time = SimTime::minutes(5);
  /// Startup-time multiplier once images are prefetched.
  double prefetch_speedup = 0.7;

  void validate() const {
    if (conversion_rate_cores_per_min <= 0)
      fail(ErrorCode::ConfigError, "conversion rate must be positive");
    if (!(prefetch_speedup > 0 && prefetch_speedup <= 1.0))
      fail(ErrorCode::ConfigError, "prefetch_speedup must be in (0, 1]");
  }
};

struct ConversionPoint {
  SimTime at;
  long cores_online = 0;
};

/// Capacity-over-time plan for converting one batch cluster to burst.
struct ConversionPlan {
  std::vector<ConversionPoint> series;  // cumulative cores, one point per tranche
  SimTime start;
  SimTime full_at;
  long target_cores = 0;   // min(needed, preemptible)
  long shortfall = 0;      // unmet part of `needed`
};

/// Burst cores online t after conversion start:
/// min(needed, preemptible, max(0, t - eviction_delay) * rate), materialized
/// as whole-minute tranches. Full capacity lands at
/// eviction_delay + ceil(target / rate) minutes.
inline ConversionPlan plan_conversion(long preemptible_cores, long needed_cores,
                                      const SpawnerConfig& cfg, SimTime start) {
  cfg.validate();
  ConversionPlan plan;
  plan.start = start;
  plan.target_cores = std::min(needed_cores, preemptible_cores);
  plan.shortfall = std::max<long>(0, needed_cores - preemptible_cores);
  if (plan.target_cores <= 0) {
    plan.full_at = start;
    return plan;
  }
  const double rate = cfg.conversion_rate_cores_per_min;
  long minutes = static_cast<long>(std::ceil(static_cast<double>(plan.target_cores) / rate));
  long online = 0;
  for (long m = 1; m <= minutes; ++m) {
    long cum = std::min<long>(plan.target_cores,
                              static_cast<long>(std::floor(rate * static_cast<double>(m))));
    if (cum <= online) continue;
    online = cum;
    plan.series.push_back({start + cfg.eviction_delay + SimTime::minutes(m), cum});
  }
  plan.full_at = start + cfg.eviction_delay + SimTime::minutes(minutes);
  return plan;
}

inline long preemptible_cores(const Cluster& cluster) {
  long total = 0;
  for (const auto& job : cluster.batch_jobs)
    if (job.preemptible && !job.evicted) total += job.cores;
  return total;
}

struct BurstSufficiency {
  bool sufficient = true;
  long shortfall_cores = 0;
};

/// Compares demand (with safety margin) against the preemptible batch cores
/// available for conversion.
inline BurstSufficiency estimate_burst_sufficiency(double demand_cores,
                                                   long preemptible_total,
                                                   double safety_margin = 1.1) {
  BurstSufficiency s;
  double padded = demand_cores * safety_margin;
  if (padded <= static_cast<double>(preemptible_total)) return s;
  s.sufficient = false;
  s.shortfall_cores = static_cast<long>(std::llround(padded)) - preemptible_total;
  return s;
}

/// Fraction of a burst cluster's capacity no longer allocated to services.
inline double freed_fraction(const Fleet& fleet, const Cluster& cluster) {
  long total = 0, used = 0;
  for (int hi : cluster.hosts) {
    total += fleet.hosts[hi].physical_cores;
    used += fleet.hosts[hi].used_stateless;
  }
  if (total == 0) return 1.0;
  return 1.0 - static_cast<double>(used) / static_cast<double>(total);
}

/// Batch jobs may resume only once at least 40% of the cluster's capacity is
/// freed.
inline bool batch_resume_allowed(const Fleet& fleet, const Cluster& cluster,
                                 double threshold = 0.40) {
  return freed_fraction(fleet, cluster) + 1e-12 >= threshold;
}

}  // namespace ufa
