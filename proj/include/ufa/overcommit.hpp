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

#include <cmath>

#include "ufa/core.hpp"

namespace ufa {

/// Inputs to the overcommit ceiling. Memory is never overcommitted, so the
/// host/service memory ratio and the safe allocation fractions bound how much
/// extra CPU a host may advertise.
struct OvercommitParams {
  double host_mem_per_core_gb = 8.0;     // M_h
  double service_mem_per_core_gb = 4.0;  // M_s
  double alpha_mem = 0.75;               // safe memory allocation fraction
  double alpha_cpu = 0.9;                // safe CPU allocation fraction

  void validate() const {
    if (host_mem_per_core_gb <= 0 || service_mem_per_core_gb <= 0 || alpha_mem <= 0 ||
        alpha_cpu <= 0)
      fail(ErrorCode::ConfigError, "overcommit params must be positive");
    if (alpha_mem > 1.0 || alpha_cpu > 1.0)
      fail(ErrorCode::ConfigError, "alpha fractions must be <= 1");
  }
};

/// Maximum achievable overcommit factor: (M_h / M_s) * (alpha_m / alpha_c).
inline double max_overcommit(const OvercommitParams& p) {
  p.validate();
  return (p.host_mem_per_core_gb / p.service_mem_per_core_gb) * (p.alpha_mem / p.alpha_cpu);
}

/// What a host advertises: the stateless pool equals physical cores; the
/// overcommit pool adds (factor - 1) x physical on top, rounded half-up.
struct PoolAdvertisement {
  int stateless_cores = 0;
  int overcommit_cores = 0;
};

inline PoolAdvertisement advertise_pools(int physical_cores, double factor) {
  if (factor < 1.0) fail(ErrorCode::ConfigError, "overcommit factor must be >= 1");
  PoolAdvertisement adv;
  adv.stateless_cores = physical_cores;
  adv.overcommit_cores =
      static_cast<int>(std::llround((factor - 1.0) * static_cast<double>(physical_cores)));
  return adv;
}

}  // namespace ufa
