// Copyright 2026 The vcluster Authors
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

#include <chrono>
#include <cstdint>

#include "vcluster/core/error.hpp"

namespace vcluster {

// All timestamps are integer milliseconds on a virtual timeline.
// Real-time operation maps the wall clock onto the same representation.
using TimeMs = std::int64_t;
using DurationMs = std::int64_t;

inline double to_seconds(DurationMs d) { return static_cast<double>(d) / 1000.0; }

/// Monotone virtual clock. The simulation driver is the only writer; it
/// advances the clock to the timestamp of each event it dispatches.
class VirtualClock {
 public:
  TimeMs now() const { return now_; }

  void advance_to(TimeMs t) {
    if (t < now_) {
      throw Error("clock may not move backwards (" + std::to_string(now_) +
                  " -> " + std::to_string(t) + ")");
    }
    now_ = t;
  }

 private:
  TimeMs now_ = 0;
};

/// Wall clock rendered as TimeMs, for live (non-simulated) operation.
inline TimeMs wall_now() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace vcluster
