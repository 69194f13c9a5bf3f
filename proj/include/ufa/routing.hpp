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
#include <vector>

#include "ufa/core.hpp"

namespace ufa {

enum class FailoverMode : int { Peak = 0, NonPeak };

inline const char* failover_mode_name(FailoverMode m) {
  return m == FailoverMode::Peak ? "Peak" : "NonPeak";
}

/// Peak when traffic volume at failover time reaches the threshold multiple
/// of the weekly peak. The comparison is inclusive.
inline FailoverMode detect_mode(double tv_failover, double tv_peak, double threshold) {
  if (tv_peak <= 0) fail(ErrorCode::ConfigError, "tv_peak must be positive");
  if (threshold <= 0 || threshold > 1)
    fail(ErrorCode::ConfigError, "mode threshold must be in (0, 1]");
  return tv_failover >= threshold * tv_peak ? FailoverMode::Peak : FailoverMode::NonPeak;
}

/// peak / full classification of a failover event. Both bounds are strict:
/// peak needs users *more than* 85% of the weekly peak, full needs *more
/// than* half the cities failed over.
struct FailoverScope {
  bool peak = false;
  bool full = false;

  bool full_peak() const { return peak && full; }
};

inline FailoverScope classify_scope(long users_on_trip, long weekly_peak_users,
                                    long cities_failed, long total_cities) {
  if (weekly_peak_users <= 0 || total_cities <= 0)
    fail(ErrorCode::ConfigError, "scope totals must be positive");
  FailoverScope s;
  s.peak = static_cast<double>(users_on_trip) > 0.85 * static_cast<double>(weekly_peak_users);
  s.full = static_cast<double>(cities_failed) > 0.5 * static_cast<double>(total_cities);
  return s;
}

/// City-to-region routing. Every city maps to exactly one region at every
/// instant; moves flip the mapping atomically at their effective time.
class RoutingTable {
 public:
  void init(std::size_t cities, const std::vector<int>& regions) {
    city_region_ = regions;
    city_region_.resize(cities, 0);
  }

  int region_of(int city) const { return city_region_[city]; }

  void move(int city, int to_region) { city_region_[city] = to_region; }

  int count_in_region(int region) const {
    int n = 0;
    for (int r : city_region_)
      if (r == region) ++n;
    return n;
  }

  std::size_t city_count() const { return city_region_.size(); }

 private:
  std::vector<int> city_region_;
};

/// Default geometric batching for city moves: small canary batches first,
/// then progressively larger ones.
inline std::vector<double> default_city_batch_fractions() { return {0.05, 0.15, 0.30, 0.50}; }

/// Splits the given cities into batches by the fraction schedule. Every city
/// appears exactly once; the last batch absorbs rounding.
inline std::vector<std::vector<int>> plan_city_batches(const std::vector<int>& cities,
                                                       const std::vector<double>& fractions) {
  std::vector<std::vector<int>> batches;
  std::size_t taken = 0;
  for (std::size_t bi = 0; bi < fractions.size() && taken < cities.size(); ++bi) {
    std::size_t want;
    if (bi + 1 == fractions.size()) {
      want = cities.size() - taken;
    } else {
      want = static_cast<std::size_t>(fractions[bi] * static_cast<double>(cities.size()) + 0.5);
      want = std::max<std::size_t>(want, 1);
      want = std::min(want, cities.size() - taken);
    }
    batches.emplace_back(cities.begin() + taken, cities.begin() + taken + want);
    taken += want;
  }
  if (taken < cities.size())
    batches.emplace_back(cities.begin() + taken, cities.end());
  return batches;
}

}  // namespace ufa
