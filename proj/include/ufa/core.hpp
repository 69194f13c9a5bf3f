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

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace ufa {

// Output-facing JSON is ordered so serialized documents are byte-stable.
using Json = nlohmann::ordered_json;

/// Virtual time in whole milliseconds. All durations in the model (RTOs,
/// convergence windows, startup latencies) are expressed in this unit.
struct SimTime {
  std::int64_t ms = 0;

  static constexpr SimTime millis(std::int64_t v) { return SimTime{v}; }
  static constexpr SimTime seconds(std::int64_t v) { return SimTime{v * 1000}; }
  static constexpr SimTime minutes(std::int64_t v) { return SimTime{v * 60'000}; }
  static constexpr SimTime hours(std::int64_t v) { return SimTime{v * 3'600'000}; }

  constexpr auto operator<=>(const SimTime&) const = default;
  constexpr SimTime operator+(SimTime o) const { return SimTime{ms + o.ms}; }
  constexpr SimTime operator-(SimTime o) const { return SimTime{ms - o.ms}; }
  SimTime& operator+=(SimTime o) {
    ms += o.ms;
    return *this;
  }

  constexpr double seconds_f() const { return static_cast<double>(ms) / 1000.0; }
  constexpr double minutes_f() const { return static_cast<double>(ms) / 60'000.0; }
};

enum class ErrorCode {
  PastEvent,
  InvalidProfile,
  MixedEdge,
  NoBaseline,
  CycleDetected,
  AlreadyInProgress,
  NotFailedOver,
  Unsatisfiable,
  DrainBlocked,
  ConfigError,
  Internal,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::PastEvent: return "PastEvent";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::MixedEdge: return "MixedEdge";
    case ErrorCode::NoBaseline: return "NoBaseline";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::AlreadyInProgress: return "AlreadyInProgress";
    case ErrorCode::NotFailedOver: return "NotFailedOver";
    case ErrorCode::Unsatisfiable: return "Unsatisfiable";
    case ErrorCode::DrainBlocked: return "DrainBlocked";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ufa
