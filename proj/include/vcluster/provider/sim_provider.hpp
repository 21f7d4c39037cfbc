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

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vcluster/core/error.hpp"
#include "vcluster/core/time.hpp"
#include "vcluster/provider/provider.hpp"

namespace vcluster::provider {

struct SimProviderConfig {
  std::uint64_t seed = 1;
  DurationMs latency_min = 30'000;  // boot latency, uniform in [min, max]
  DurationMs latency_max = 40'000;
  double failure_rate = 0.0;        // per-call probability of a Transient error
  std::optional<int> capacity;      // max live instances, unlimited if absent

  void validate() const {
    if (latency_min < 0 || latency_max < latency_min) {
      throw Error("latency range must satisfy 0 <= min <= max");
    }
    if (failure_rate < 0.0 || failure_rate > 1.0) {
      throw Error("failure_rate must be in [0, 1]");
    }
    if (capacity && *capacity < 0) throw Error("capacity must be >= 0");
  }
};

/// Deterministic in-memory cloud. Identical seed and call sequence give
/// identical ids, latencies, and failures, which makes whole-simulation
/// runs reproducible byte for byte.
///
/// RNG discipline, fixed so the variate stream is part of the contract:
/// every create or delete call consumes exactly one failure variate first;
/// a successful create then consumes exactly one latency variate. Nothing
/// else touches the generator.
class SimProvider : public CloudProvider {
 public:
  explicit SimProvider(SimProviderConfig config) : config_(config), rng_(config.seed) {
    config_.validate();
  }

  CreateResult create_instance(const ConcreteInstanceRequest& req, TimeMs now) override {
    CreateResult res;
    if (next_unit() < config_.failure_rate) {
      res.error = ProviderErrorKind::Transient;
      return res;
    }
    if (config_.capacity && live_count() >= *config_.capacity) {
      res.error = ProviderErrorKind::CapacityExceeded;
      return res;
    }
    DurationMs span = config_.latency_max - config_.latency_min;
    DurationMs latency =
        config_.latency_min + static_cast<DurationMs>(next_unit() * static_cast<double>(span + 1));
    if (latency > config_.latency_max) latency = config_.latency_max;

    InstanceInfo info;
    info.instance_id = "sim-" + std::to_string(++counter_);
    info.name = req.name;
    info.active_at = now + latency;
    creation_order_.push_back(info.instance_id);
    instances_.emplace(info.instance_id, info);

    res.instance_id = info.instance_id;
    res.active_at = info.active_at;
    return res;
  }

  /// Deleting an instance that was already deleted succeeds (idempotent);
  /// deleting an id this provider never issued is UnknownInstance.
  DeleteResult delete_instance(const std::string& instance_id, TimeMs) override {
    DeleteResult res;
    if (next_unit() < config_.failure_rate) {
      res.error = ProviderErrorKind::Transient;
      return res;
    }
    auto it = instances_.find(instance_id);
    if (it == instances_.end()) {
      res.error = ProviderErrorKind::UnknownInstance;
      return res;
    }
    it->second.alive = false;
    return res;
  }

  std::optional<InstanceInfo> describe(const std::string& instance_id) const {
    auto it = instances_.find(instance_id);
    if (it == instances_.end()) return std::nullopt;
    return it->second;
  }

  InstanceStatus status(const std::string& instance_id, TimeMs now) const {
    auto it = instances_.find(instance_id);
    if (it == instances_.end()) throw Error("unknown instance: " + instance_id);
    return now < it->second.active_at ? InstanceStatus::Booting : InstanceStatus::Active;
  }

  int live_count() const {
    int n = 0;
    for (const auto& [id, info] : instances_) n += info.alive ? 1 : 0;
    return n;
  }

  // Ids in creation order.
  const std::vector<std::string>& created_ids() const { return creation_order_; }

  std::vector<std::string> live_ids() const {
    std::vector<std::string> out;
    for (const std::string& id : creation_order_) {
      if (instances_.at(id).alive) out.push_back(id);
    }
    return out;
  }

 private:
  // Top 53 bits of the engine output, the usual uniform-in-[0,1) mapping.
  double next_unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  SimProviderConfig config_;
  std::mt19937_64 rng_;
  std::map<std::string, InstanceInfo> instances_;
  std::vector<std::string> creation_order_;
  std::uint64_t counter_ = 0;
};

}  // namespace vcluster::provider
