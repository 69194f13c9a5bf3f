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

#include <vector>

#include "ufa/fleet.hpp"
#include "ufa/isolation.hpp"
#include "ufa/rng.hpp"

namespace ufa {

enum class FailureCause : int {
  None = 0,
  BlockedDependencyFailClose,
  Capacity,
  IsolationBlocked,
  AmbientError,
};

inline const char* failure_cause_name(FailureCause c) {
  switch (c) {
    case FailureCause::None: return "none";
    case FailureCause::BlockedDependencyFailClose: return "blocked_dependency_failclose";
    case FailureCause::Capacity: return "capacity";
    case FailureCause::IsolationBlocked: return "isolation_blocked";
    case FailureCause::AmbientError: return "ambient_error";
  }
  return "?";
}

struct RequestOutcome {
  int root_service = -1;
  int endpoint = 0;
  bool success = true;
  FailureCause cause = FailureCause::None;
  /// Expected failover side effects are tagged so SLA math can exclude them.
  bool failover_tagged = false;
  int blame_edge = -1;  // fleet edge behind a fail-close propagation
};

/// Everything a single request evaluation needs to know about the world at
/// its instant: who is serving, what is blocked, and how noisy the baseline
/// is.
struct GraphView {
  const Fleet* fleet = nullptr;
  const IsolationEngine* isolation = nullptr;
  /// Per-service serving flag. When empty it is derived from the fleet's
  /// environments on the fly.
  std::vector<char> service_serving;
  int zone = -1;
  SimTime now{0};
  double ambient_error_rate = 0.0;

  void refresh_serving() {
    service_serving.assign(fleet->services.size(), 0);
    for (const auto& env : fleet->envs)
      if (env.serving_replicas() > 0) service_serving[env.service] = 1;
  }

  bool serving(int service) const {
    if (service_serving.empty()) {
      for (const auto& env : fleet->envs)
        if (env.service == service && env.serving_replicas() > 0) return true;
      return false;
    }
    return service_serving[service] != 0;
  }

  double blocked_fraction(int service) const {
    if (!isolation) return 0.0;
    return isolation->blocked_fraction(service, fleet->services[service].failure_class,
                                       zone, now);
  }
};

namespace detail {

enum class VisitState : char { Unvisited = 0, InProgress, Ok, Failed };

struct EvalScratch {
  std::vector<VisitState> state;
  std::vector<int> blame;  // edge that failed the service

  void reset(std::size_t n) {
    state.assign(n, VisitState::Unvisited);
    blame.assign(n, -1);
  }
};

/// Depth-first success check for one service within one request. A callee
/// counts as failed when it is blocked, unplaced, or failed through its own
/// dependencies; a failed callee fails the caller only on fail-close edges
/// (Indeterminate counts as fail-close).
inline bool eval_service(const GraphView& view, int service, SplitRng& rng,
                         EvalScratch& scratch) {
  auto& st = scratch.state[service];
  if (st == VisitState::Ok) return true;
  if (st == VisitState::Failed) return false;
  if (st == VisitState::InProgress)
    fail(ErrorCode::CycleDetected,
         "dependency cycle through service " + view.fleet->services[service].id);
  st = VisitState::InProgress;

  bool ok = true;
  for (int ei : view.fleet->services[service].out_edges) {
    const DependencyEdge& e = view.fleet->edges[ei];
    bool callee_failed = false;
    double frac = view.blocked_fraction(e.callee);
    if (frac > 0.0 && frac + 1e-12 >= e.failure_activation_fraction &&
        rng.bernoulli(frac)) {
      callee_failed = true;
    } else if (!view.serving(e.callee)) {
      callee_failed = true;
    } else if (!eval_service(view, e.callee, rng, scratch)) {
      callee_failed = true;
    }
    if (callee_failed && e.ground_truth != EdgeSemantics::FailOpen) {
      ok = false;
      scratch.blame[service] =
          scratch.blame[e.callee] >= 0 && scratch.state[e.callee] == VisitState::Failed
              ? scratch.blame[e.callee]
              : ei;
      break;
    }
  }
  scratch.state[service] = ok ? VisitState::Ok : VisitState::Failed;
  return ok;
}

}  // namespace detail

/// Evaluates one root request against the current graph state.
inline RequestOutcome evaluate_request(const GraphView& view, int root_service,
                                       int endpoint, SplitRng& rng) {
  RequestOutcome out;
  out.root_service = root_service;
  out.endpoint = endpoint;

  const Service& root = view.fleet->services[root_service];
  double frac = view.blocked_fraction(root_service);
  if (frac > 0.0 && rng.bernoulli(frac)) {
    out.success = false;
    out.cause = FailureCause::IsolationBlocked;
    out.failover_tagged = root.failure_class == FailureClass::RestoreLater ||
                          root.failure_class == FailureClass::Terminate;
    return out;
  }
  if (!view.serving(root_service)) {
    out.success = false;
    out.cause = FailureCause::Capacity;
    // Capacity gaps of preempted classes during failover are expected too.
    out.failover_tagged = root.failure_class == FailureClass::RestoreLater ||
                          root.failure_class == FailureClass::Terminate;
    return out;
  }

  thread_local detail::EvalScratch scratch;
  scratch.reset(view.fleet->services.size());
  if (!detail::eval_service(view, root_service, rng, scratch)) {
    out.success = false;
    out.cause = FailureCause::BlockedDependencyFailClose;
    out.blame_edge = scratch.blame[root_service];
    return out;
  }

  if (view.ambient_error_rate > 0.0 && rng.bernoulli(view.ambient_error_rate)) {
    out.success = false;
    out.cause = FailureCause::AmbientError;
  }
  return out;
}

/// Deterministic success probability of a root request under the current
/// graph state, assuming independence across edges. Used by gates that need
/// expected error rates rather than sampled outcomes.
inline double success_probability(const GraphView& view, int root_service) {
  std::vector<double> memo(view.fleet->services.size(), -1.0);
  std::vector<char> on_path(view.fleet->services.size(), 0);

  auto p_ok = [&](auto&& self, int svc) -> double {
    if (memo[svc] >= 0) return memo[svc];
    if (on_path[svc])
      fail(ErrorCode::CycleDetected,
           "dependency cycle through service " + view.fleet->services[svc].id);
    on_path[svc] = 1;
    double ok = 1.0;
    for (int ei : view.fleet->services[svc].out_edges) {
      const DependencyEdge& e = view.fleet->edges[ei];
      if (e.ground_truth == EdgeSemantics::FailOpen) continue;
      double frac = view.blocked_fraction(e.callee);
      double p_blocked =
          (frac > 0.0 && frac + 1e-12 >= e.failure_activation_fraction) ? frac : 0.0;
      double p_down = view.serving(e.callee) ? 1.0 - self(self, e.callee) : 1.0;
      double p_callee_failed = p_blocked + (1.0 - p_blocked) * p_down;
      ok *= 1.0 - p_callee_failed;
    }
    on_path[svc] = 0;
    memo[svc] = ok;
    return ok;
  };

  double frac = view.blocked_fraction(root_service);
  if (!view.serving(root_service)) return 0.0;
  return (1.0 - frac) * p_ok(p_ok, root_service);
}

}  // namespace ufa
