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

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "vcluster/core/error.hpp"

namespace vcluster {

/// FIFO queue bookkeeping. `pending` holds job ids in dispatch order
/// (ordered by submit time, job id breaking ties); `running` is unordered.
struct QueueState {
  std::vector<std::string> pending;
  std::set<std::string> running;

  bool is_pending(const std::string& job_id) const {
    return std::find(pending.begin(), pending.end(), job_id) != pending.end();
  }

  void remove_pending(const std::string& job_id) {
    auto it = std::find(pending.begin(), pending.end(), job_id);
    if (it == pending.end()) throw Error("job " + job_id + " is not pending");
    pending.erase(it);
  }
};

}  // namespace vcluster
