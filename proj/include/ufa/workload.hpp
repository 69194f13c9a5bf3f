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
#include <map>
#include <utility>
#include <vector>

#include "ufa/classifier.hpp"
#include "ufa/fleet.hpp"
#include "ufa/fleet_gen.hpp"
#include "ufa/rng.hpp"

namespace ufa {

struct TraceGenOptions {
  long records = 100'000;
  SimTime duration = SimTime::hours(1);
  /// Fraction of each edge's records where the callee fails (synthetic fault
  /// injection so the classifier has evidence to chew on).
  double callee_failure_fraction = 0.45;
  /// Probability of flipping the caller_failed label on a callee-failure
  /// record.
  double label_noise = 0.0;
  /// When positive, every edge gets at least this many callee failures even
  /// if its call-volume quota is smaller. Slightly distorts cell shares.
  long min_callee_failures_per_edge = 0;
};

/// Synthesizes a dependency trace whose caller-tier x callee-tier volume
/// shares follow the cross-tier call matrix. Records per edge are
/// apportioned by largest remainder, so the big cells land within a fraction
/// of a percent of their reference share; the randomness goes into ordering,
/// timestamps and label noise. Deterministic per seed.
inline std::vector<TraceRecord> synthesize_dependency_trace(const Fleet& fleet,
                                                            const TraceGenOptions& opts,
                                                            std::uint64_t seed) {
  SplitRng rng = SplitRng(seed).split("trace");
  const auto& volume = cross_tier_call_volume();

  // Edge weight: its cell volume split evenly across the cell's edges.
  std::array<std::array<int, kTierCount>, kTierCount> cell_edges{};
  for (const auto& e : fleet.edges)
    ++cell_edges[static_cast<int>(fleet.services[e.caller].tier)]
                [static_cast<int>(fleet.services[e.callee].tier)];

  std::vector<double> weight(fleet.edges.size(), 0.0);
  double weight_sum = 0;
  for (std::size_t i = 0; i < fleet.edges.size(); ++i) {
    const auto& e = fleet.edges[i];
    int ci = static_cast<int>(fleet.services[e.caller].tier);
    int cj = static_cast<int>(fleet.services[e.callee].tier);
    weight[i] = volume[ci][cj] / cell_edges[ci][cj];
    weight_sum += weight[i];
  }
  if (weight_sum <= 0 || fleet.edges.empty()) return {};

  // Largest-remainder apportionment of the record budget.
  std::vector<long> quota(fleet.edges.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  long assigned = 0;
  for (std::size_t i = 0; i < fleet.edges.size(); ++i) {
    double exact = static_cast<double>(opts.records) * weight[i] / weight_sum;
    quota[i] = static_cast<long>(exact);
    assigned += quota[i];
    remainders.push_back({exact - static_cast<double>(quota[i]), i});
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (long r = 0; r < opts.records - assigned && r < static_cast<long>(remainders.size()); ++r)
    ++quota[remainders[r].second];

  if (opts.min_callee_failures_per_edge > 0) {
    long floor_records = static_cast<long>(
        std::ceil(opts.min_callee_failures_per_edge / opts.callee_failure_fraction));
    for (auto& q : quota) q = std::max(q, floor_records);
  }

  std::vector<TraceRecord> records;
  for (std::size_t i = 0; i < fleet.edges.size(); ++i) {
    const auto& e = fleet.edges[i];
    bool fail_close = e.ground_truth != EdgeSemantics::FailOpen;
    long failures = static_cast<long>(std::llround(
        static_cast<double>(quota[i]) * opts.callee_failure_fraction));
    if (opts.min_callee_failures_per_edge > 0)
      failures = std::max(failures, opts.min_callee_failures_per_edge);
    for (long k = 0; k < quota[i]; ++k) {
      TraceRecord r;
      r.caller_service = fleet.services[e.caller].id;
      r.caller_endpoint = e.caller_endpoint;
      r.callee_service = fleet.services[e.callee].id;
      r.callee_endpoint = e.callee_endpoint;
      r.callee_failed = k < failures;
      if (r.callee_failed) {
        r.caller_failed = fail_close;
        if (opts.label_noise > 0 && rng.bernoulli(opts.label_noise))
          r.caller_failed = !r.caller_failed;
      }
      records.push_back(std::move(r));
    }
  }

  // Deterministic shuffle, then evenly spread timestamps.
  for (std::size_t i = records.size(); i > 1; --i)
    std::swap(records[i - 1], records[rng.uniform(i)]);
  for (std::size_t i = 0; i < records.size(); ++i)
    records[i].timestamp = SimTime::millis(opts.duration.ms * static_cast<std::int64_t>(i) /
                                           std::max<std::int64_t>(1, records.size()));
  return records;
}

/// Empirical caller-tier x callee-tier share of a trace, for comparing
/// against the reference matrix.
inline std::map<std::pair<Tier, Tier>, double> trace_cell_shares(
    const Fleet& fleet, const std::vector<TraceRecord>& records) {
  std::map<std::pair<Tier, Tier>, double> counts;
  for (const auto& r : records) {
    int caller = fleet.find_service(r.caller_service);
    int callee = fleet.find_service(r.callee_service);
    if (caller < 0 || callee < 0) continue;
    counts[{fleet.services[caller].tier, fleet.services[callee].tier}] += 1.0;
  }
  for (auto& [k, v] : counts) v /= static_cast<double>(records.size());
  return counts;
}

/// Reference share of one cell, renormalized over the cells that actually
/// have edges in this fleet.
inline double reference_cell_share(const Fleet& fleet, Tier caller, Tier callee) {
  const auto& volume = cross_tier_call_volume();
  std::array<std::array<bool, kTierCount>, kTierCount> present{};
  for (const auto& e : fleet.edges)
    present[static_cast<int>(fleet.services[e.caller].tier)]
           [static_cast<int>(fleet.services[e.callee].tier)] = true;
  double total = 0;
  for (int i = 0; i < kTierCount; ++i)
    for (int j = 0; j < kTierCount; ++j)
      if (present[i][j]) total += volume[i][j];
  if (total <= 0) return 0;
  return volume[static_cast<int>(caller)][static_cast<int>(callee)] / total;
}

/// Distribution over root-request entry tiers. Requests enter the mesh at
/// customer-facing tiers by default.
struct RootTierMix {
  std::map<Tier, double> weights = {{Tier::T0, 0.1}, {Tier::T1, 0.7}, {Tier::T2, 0.2}};

  /// Per-service root weights for a fleet (tier weight split evenly over the
  /// tier's services).
  std::vector<double> service_weights(const Fleet& fleet) const {
    std::array<int, kTierCount> count{};
    for (const auto& s : fleet.services) ++count[static_cast<int>(s.tier)];
    std::vector<double> w(fleet.services.size(), 0.0);
    for (std::size_t i = 0; i < fleet.services.size(); ++i) {
      auto it = weights.find(fleet.services[i].tier);
      if (it != weights.end() && count[static_cast<int>(fleet.services[i].tier)] > 0)
        w[i] = it->second / count[static_cast<int>(fleet.services[i].tier)];
    }
    return w;
  }
};

}  // namespace ufa
