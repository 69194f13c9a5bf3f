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

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "ufa/core.hpp"

namespace ufa {

using EventHandle = std::uint64_t;

/// Single-threaded discrete-event engine. Events fire in (fire_at, sequence)
/// order; the sequence counter makes same-timestamp delivery FIFO by insertion.
/// For a fixed schedule the delivered-event log is identical across runs.
class SimKernel {
 public:
  SimTime now() const { return now_; }
  std::uint64_t delivered_count() const { return delivered_; }

  /// Mirror delivered events to a line-delimited JSON log.
  void open_event_log(const std::string& path) {
    log_.open(path, std::ios::out | std::ios::trunc);
    logging_ = log_.is_open();
  }

  void log_record(SimTime at, std::uint64_t seq, const std::string& kind, const Json& payload) {
    if (!logging_) return;
    Json line;
    line["fire_at"] = at.ms;
    line["sequence"] = seq;
    line["kind"] = kind;
    line["payload"] = payload;
    log_ << line.dump() << '\n';
  }

  EventHandle schedule(SimTime fire_at, std::string kind, Json payload,
                       std::function<void()> fn) {
    if (fire_at < now_)
      fail(ErrorCode::PastEvent,
           "fire_at " + std::to_string(fire_at.ms) + "ms is before now " +
               std::to_string(now_.ms) + "ms");
    const std::uint64_t seq = next_seq_++;
    queue_.emplace(Key{fire_at.ms, seq},
                   Pending{std::move(kind), std::move(payload), std::move(fn)});
    fire_times_[seq] = fire_at.ms;
    return seq;
  }

  EventHandle schedule_in(SimTime delay, std::string kind, Json payload,
                          std::function<void()> fn) {
    return schedule(now_ + delay, std::move(kind), std::move(payload), std::move(fn));
  }

  /// True when the event existed and had not fired; it will never fire now.
  bool cancel(EventHandle h) {
    auto it = fire_times_.find(h);
    if (it == fire_times_.end()) return false;
    queue_.erase(Key{it->second, h});
    fire_times_.erase(it);
    return true;
  }

  /// Delivers every event with fire_at <= t, then advances the clock to t.
  /// Returns the number of events delivered by this call.
  std::uint64_t run_until(SimTime t) {
    if (t < now_) fail(ErrorCode::PastEvent, "run_until target is in the past");
    std::uint64_t n = 0;
    while (!queue_.empty()) {
      auto it = queue_.begin();
      if (it->first.first > t.ms) break;
      Pending ev = std::move(it->second);
      const SimTime at = SimTime::millis(it->first.first);
      const std::uint64_t seq = it->first.second;
      queue_.erase(it);
      fire_times_.erase(seq);
      now_ = at;
      ++delivered_;
      ++n;
      log_record(at, seq, ev.kind, ev.payload);
      if (ev.fn) ev.fn();
      if (on_event_delivered) on_event_delivered();
    }
    now_ = t;
    return n;
  }

  bool pending_empty() const { return queue_.empty(); }

  /// Invoked after each delivered event; used by invariant monitors.
  std::function<void()> on_event_delivered;

 private:
  using Key = std::pair<std::int64_t, std::uint64_t>;  // (fire_at ms, sequence)
  struct Pending {
    std::string kind;
    Json payload;
    std::function<void()> fn;
  };

  SimTime now_{0};
  std::uint64_t next_seq_ = 0;
  std::uint64_t delivered_ = 0;
  std::map<Key, Pending> queue_;
  std::unordered_map<std::uint64_t, std::int64_t> fire_times_;
  std::ofstream log_;
  bool logging_ = false;
};

}  // namespace ufa
