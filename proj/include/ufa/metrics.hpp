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
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ufa/core.hpp"
#include "ufa/evaluate.hpp"
#include "ufa/fleet.hpp"

namespace ufa {

/// One root request as the metrics pipeline sees it.
struct RecordedOutcome {
  SimTime at;
  int city = -1;
  int service = -1;
  int endpoint = 0;
  FailureClass cls = FailureClass::AlwaysOn;
  bool success = true;
  bool tagged = false;
  FailureCause cause = FailureCause::None;
};

struct AvailabilityResult {
  double value = 1.0;
  long total = 0;
  long successes = 0;
  bool empty_window = false;  // defined as 1.0, flagged as suspicious
};

/// Success fraction of critical (AlwaysOn + ActiveMigrate) root requests in
/// [begin, end). Tagged failover side effects are excluded when asked. An
/// empty denominator yields 1.0 with a warning flag.
inline AvailabilityResult compute_availability(std::span<const RecordedOutcome> outcomes,
                                               SimTime begin, SimTime end,
                                               bool exclude_tagged) {
  AvailabilityResult res;
  for (const auto& o : outcomes) {
    if (o.at < begin || o.at >= end) continue;
    if (o.cls != FailureClass::AlwaysOn && o.cls != FailureClass::ActiveMigrate) continue;
    if (exclude_tagged && o.tagged) continue;
    ++res.total;
    if (o.success) ++res.successes;
  }
  if (res.total == 0) {
    res.empty_window = true;
    res.value = 1.0;
  } else {
    res.value = static_cast<double>(res.successes) / static_cast<double>(res.total);
  }
  return res;
}

struct CoresByClassSample {
  SimTime at;
  long ao_serving = 0;
  long am_steady = 0;
  long am_bursted = 0;
  long rl_not_bursted = 0;  // terminated, awaiting restoration
  long rl_bursted = 0;
  long rl_steady = 0;
  long terminate_serving = 0;
};

struct UtilizationSample {
  SimTime at;
  int region = 0;
  double consumed = 0;
  double physical = 0;

  double value() const { return physical > 0 ? consumed / physical : 0.0; }
};

struct RtoRecord {
  std::string env;
  FailureClass cls = FailureClass::RestoreLater;
  SimTime terminated_at;
  std::optional<SimTime> restored_at;
  bool violated = false;
};

struct EndpointWindowStats {
  long total = 0;
  long failures = 0;
  long failures_untagged = 0;
  long total_untagged = 0;
};

class MetricsCollector {
 public:
  SimTime window = SimTime::minutes(10);

  void record_outcome(const RecordedOutcome& o) {
    outcomes_.push_back(o);
    auto& ep = endpoint_stats_[{window_of(o.at), o.service, o.endpoint}];
    ++ep.total;
    if (!o.success) ++ep.failures;
    if (!o.tagged) {
      ++ep.total_untagged;
      if (!o.success) ++ep.failures_untagged;
    }
    auto& city = city_stats_[{window_of(o.at), o.city}];
    ++city.first;
    if (o.success) ++city.second;
  }

  void sample_utilization(const UtilizationSample& s) { utilization_.push_back(s); }
  void sample_cores_by_class(const CoresByClassSample& s) { cores_by_class_.push_back(s); }

  void sample_service_consumption(SimTime at, int service, double cores) {
    service_consumption_[{window_of(at), service}] += cores;
  }

  void burst_point(SimTime at, const std::string& cluster, long cores_online) {
    burst_ramp_.push_back({at, cluster, cores_online});
  }

  void eviction(SimTime at, int count = 1) { evictions_[at.ms / 3'600'000] += count; }

  void rto_record(RtoRecord r) { rto_.push_back(std::move(r)); }

  void phase_transition(SimTime at, const std::string& phase) {
    phases_.push_back({at, phase});
  }

  void warning(const std::string& w) { warnings_.push_back(w); }

  long window_of(SimTime t) const { return t.ms / window.ms; }

  const std::vector<RecordedOutcome>& outcomes() const { return outcomes_; }
  const std::vector<UtilizationSample>& utilization() const { return utilization_; }
  const std::vector<CoresByClassSample>& cores_by_class() const { return cores_by_class_; }
  const std::vector<RtoRecord>& rto_records() const { return rto_; }
  const std::vector<std::pair<SimTime, std::string>>& phases() const { return phases_; }

  AvailabilityResult availability(SimTime begin, SimTime end, bool exclude_tagged) const {
    return compute_availability(outcomes_, begin, end, exclude_tagged);
  }

  /// Mean steady-cluster utilization for a region over [begin, end).
  double mean_utilization(int region, SimTime begin, SimTime end) const {
    double sum = 0;
    long n = 0;
    for (const auto& s : utilization_) {
      if (s.region != region || s.at < begin || s.at >= end) continue;
      sum += s.value();
      ++n;
    }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
  }

  double p99_utilization(int region, SimTime begin, SimTime end) const {
    std::vector<double> vals;
    for (const auto& s : utilization_)
      if (s.region == region && s.at >= begin && s.at < end) vals.push_back(s.value());
    if (vals.empty()) return 0.0;
    std::sort(vals.begin(), vals.end());
    std::size_t idx = static_cast<std::size_t>(0.99 * static_cast<double>(vals.size() - 1));
    return vals[idx];
  }

  // -- report rendering ----------------------------------------------------

  Json report_json(const Fleet& fleet, SimTime horizon) const {
    Json j;
    j["schema_version"] = 1;
    j["horizon_ms"] = horizon.ms;

    Json windows = Json::array();
    const long nwin = horizon.ms / window.ms + (horizon.ms % window.ms ? 1 : 0);
    double min_excl = 1.0;
    for (long w = 0; w < nwin; ++w) {
      SimTime b = SimTime::millis(w * window.ms);
      SimTime e = SimTime::millis(std::min(horizon.ms, (w + 1) * window.ms));
      auto excl = compute_availability(outcomes_, b, e, true);
      auto incl = compute_availability(outcomes_, b, e, false);
      if (!excl.empty_window) min_excl = std::min(min_excl, excl.value);
      Json wj;
      wj["start_ms"] = b.ms;
      wj["critical_availability_excl_tagged"] = excl.value;
      wj["critical_availability_incl_tagged"] = incl.value;
      wj["requests"] = excl.total;
      wj["empty"] = excl.empty_window;
      windows.push_back(wj);
    }
    auto overall_excl = compute_availability(outcomes_, SimTime{0}, horizon, true);
    auto overall_incl = compute_availability(outcomes_, SimTime{0}, horizon, false);
    j["availability"] = Json{
        {"critical_excl_tagged", overall_excl.value},
        {"critical_incl_tagged", overall_incl.value},
        {"min_window_excl_tagged", min_excl},
        {"windows", windows},
    };

    Json util = Json::array();
    for (int r = 0; r < 2; ++r) {
      Json rj;
      rj["region"] = r < static_cast<int>(fleet.regions.size()) ? fleet.regions[r]
                                                                : std::to_string(r);
      rj["mean"] = mean_utilization(r, SimTime{0}, horizon);
      rj["p99"] = p99_utilization(r, SimTime{0}, horizon);
      util.push_back(rj);
    }
    j["utilization"] = util;

    Json rto = Json::array();
    long violations = 0;
    for (const auto& r : rto_) {
      Json rj;
      rj["env"] = r.env;
      rj["class"] = failure_class_name(r.cls);
      rj["terminated_ms"] = r.terminated_at.ms;
      if (r.restored_at)
        rj["restored_ms"] = r.restored_at->ms;
      else
        rj["restored_ms"] = nullptr;
      rj["downtime_ms"] = r.restored_at ? (r.restored_at->ms - r.terminated_at.ms) : -1;
      rj["rto_violated"] = r.violated;
      if (r.violated) ++violations;
      rto.push_back(rj);
    }
    j["rto"] = Json{{"violations", violations}, {"environments", rto}};

    Json ev = Json::array();
    for (const auto& [hour, count] : evictions_)
      ev.push_back(Json{{"hour", hour}, {"evictions", count}});
    j["evictions_per_hour"] = ev;

    Json series = Json::array();
    for (const auto& s : cores_by_class_) {
      Json sj;
      sj["t_ms"] = s.at.ms;
      sj["ao_serving"] = s.ao_serving;
      sj["am_steady"] = s.am_steady;
      sj["am_bursted"] = s.am_bursted;
      sj["rl_steady"] = s.rl_steady;
      sj["rl_not_bursted"] = s.rl_not_bursted;
      sj["rl_bursted"] = s.rl_bursted;
      sj["terminate_serving"] = s.terminate_serving;
      series.push_back(sj);
    }
    j["cores_by_class"] = series;

    Json ramp = Json::array();
    for (const auto& b : burst_ramp_)
      ramp.push_back(Json{{"t_ms", b.at.ms}, {"cluster", b.cluster}, {"cores_online", b.cores}});
    j["burst_ramp"] = ramp;

    Json ph = Json::array();
    for (const auto& [at, name] : phases_)
      ph.push_back(Json{{"t_ms", at.ms}, {"phase", name}});
    j["phases"] = ph;

    j["warnings"] = warnings_;
    return j;
  }

  std::string utilization_csv() const {
    std::ostringstream os;
    os << "time_ms,region,utilization\n";
    for (const auto& s : utilization_)
      os << s.at.ms << ',' << s.region << ',' << s.value() << '\n';
    return os.str();
  }

  std::string cores_by_class_csv() const {
    std::ostringstream os;
    os << "time_ms,ao_serving,am_steady,am_bursted,rl_steady,rl_not_bursted,rl_bursted,"
          "terminate_serving\n";
    for (const auto& s : cores_by_class_)
      os << s.at.ms << ',' << s.ao_serving << ',' << s.am_steady << ',' << s.am_bursted << ','
         << s.rl_steady << ',' << s.rl_not_bursted << ',' << s.rl_bursted << ','
         << s.terminate_serving << '\n';
    return os.str();
  }

  std::string burst_ramp_csv() const {
    std::ostringstream os;
    os << "time_ms,cluster,cores_online\n";
    for (const auto& b : burst_ramp_) os << b.at.ms << ',' << b.cluster << ',' << b.cores << '\n';
    return os.str();
  }

  std::string availability_by_city_csv(const Fleet& fleet, SimTime horizon) const {
    std::ostringstream os;
    os << "time_ms,city,availability\n";
    const long nwin = horizon.ms / window.ms;
    for (long w = 0; w <= nwin; ++w) {
      for (std::size_t c = 0; c < fleet.cities.size(); ++c) {
        auto it = city_stats_.find({w, static_cast<int>(c)});
        if (it == city_stats_.end() || it->second.first == 0) continue;
        os << w * window.ms << ',' << fleet.cities[c].id << ','
           << static_cast<double>(it->second.second) / static_cast<double>(it->second.first)
           << '\n';
      }
    }
    return os.str();
  }

  // Per-endpoint stats for baseline comparison.
  const std::map<std::tuple<long, int, int>, EndpointWindowStats>& endpoint_stats() const {
    return endpoint_stats_;
  }
  const std::map<std::pair<long, int>, double>& service_consumption() const {
    return service_consumption_;
  }

 private:
  struct BurstPoint {
    SimTime at;
    std::string cluster;
    long cores = 0;
  };

  std::vector<RecordedOutcome> outcomes_;
  std::vector<UtilizationSample> utilization_;
  std::vector<CoresByClassSample> cores_by_class_;
  std::vector<BurstPoint> burst_ramp_;
  std::map<long, int> evictions_;
  std::vector<RtoRecord> rto_;
  std::vector<std::pair<SimTime, std::string>> phases_;
  std::vector<std::string> warnings_;
  std::map<std::tuple<long, int, int>, EndpointWindowStats> endpoint_stats_;
  std::map<std::pair<long, int>, std::pair<long, long>> city_stats_;  // (total, success)
  std::map<std::pair<long, int>, double> service_consumption_;
};

// ---------------------------------------------------------------------------
// Baseline comparison
// ---------------------------------------------------------------------------

struct RegressionThresholds {
  double relative_increase = 0.5;    // flagged above baseline * (1 + this)
  double absolute_floor = 0.001;     // and at least this much worse (0.1 pp)
};

struct BaselineComparison {
  struct EndpointDelta {
    int service = -1;
    int endpoint = 0;
    double baseline_error_rate = 0;
    double drill_error_rate = 0;
    double baseline_throughput_per_core = 0;
    double drill_throughput_per_core = 0;
    bool regression = false;
  };
  std::vector<EndpointDelta> endpoints;
  long regressions = 0;

  Json to_json(const Fleet& fleet) const {
    Json arr = Json::array();
    for (const auto& d : endpoints) {
      Json j;
      j["service"] = d.service >= 0 ? fleet.services[d.service].id : "?";
      j["endpoint"] = d.endpoint;
      j["baseline_error_rate"] = d.baseline_error_rate;
      j["drill_error_rate"] = d.drill_error_rate;
      j["baseline_throughput_per_core"] = d.baseline_throughput_per_core;
      j["drill_throughput_per_core"] = d.drill_throughput_per_core;
      j["regression"] = d.regression;
      arr.push_back(j);
    }
    return Json{{"regressions", regressions}, {"endpoints", arr}};
  }
};

/// Per-endpoint error-rate and throughput-per-core deltas between two
/// windows. Tagged (expected failover) outcomes are excluded from error
/// rates. A regression needs both the relative and the absolute error-rate
/// thresholds exceeded.
inline BaselineComparison compare_baseline(const MetricsCollector& metrics,
                                           SimTime baseline_begin, SimTime baseline_end,
                                           SimTime drill_begin, SimTime drill_end,
                                           const RegressionThresholds& thresholds = {}) {
  if (!(baseline_end <= drill_begin || drill_end <= baseline_begin))
    fail(ErrorCode::ConfigError, "baseline and drill windows must not overlap");

  struct Acc {
    long total = 0, failures = 0;
    double consumed = 0;
  };
  std::map<std::pair<int, int>, Acc> base, drill;
  long wb0 = baseline_begin.ms / metrics.window.ms, wb1 = (baseline_end.ms - 1) / metrics.window.ms;
  long wd0 = drill_begin.ms / metrics.window.ms, wd1 = (drill_end.ms - 1) / metrics.window.ms;
  for (const auto& [key, st] : metrics.endpoint_stats()) {
    auto [win, svc, ep] = key;
    if (win >= wb0 && win <= wb1) {
      auto& a = base[{svc, ep}];
      a.total += st.total_untagged;
      a.failures += st.failures_untagged;
    }
    if (win >= wd0 && win <= wd1) {
      auto& a = drill[{svc, ep}];
      a.total += st.total_untagged;
      a.failures += st.failures_untagged;
    }
  }
  for (const auto& [key, cores] : metrics.service_consumption()) {
    auto [win, svc] = key;
    if (win >= wb0 && win <= wb1)
      for (auto& [k, a] : base)
        if (k.first == svc) a.consumed += cores;
    if (win >= wd0 && win <= wd1)
      for (auto& [k, a] : drill)
        if (k.first == svc) a.consumed += cores;
  }

  BaselineComparison cmp;
  for (const auto& [key, b] : base) {
    auto it = drill.find(key);
    if (it == drill.end() || b.total == 0 || it->second.total == 0) continue;
    BaselineComparison::EndpointDelta d;
    d.service = key.first;
    d.endpoint = key.second;
    d.baseline_error_rate = static_cast<double>(b.failures) / static_cast<double>(b.total);
    d.drill_error_rate =
        static_cast<double>(it->second.failures) / static_cast<double>(it->second.total);
    d.baseline_throughput_per_core =
        b.consumed > 0 ? static_cast<double>(b.total) / b.consumed : 0;
    d.drill_throughput_per_core =
        it->second.consumed > 0 ? static_cast<double>(it->second.total) / it->second.consumed : 0;
    double delta = d.drill_error_rate - d.baseline_error_rate;
    d.regression = delta > thresholds.absolute_floor &&
                   d.drill_error_rate > d.baseline_error_rate * (1.0 + thresholds.relative_increase);
    if (d.regression) ++cmp.regressions;
    cmp.endpoints.push_back(d);
  }
  return cmp;
}

}  // namespace ufa
