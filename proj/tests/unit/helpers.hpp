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

#include <deque>
#include <string>
#include <vector>

#include "vcluster/core/types.hpp"
#include "vcluster/provider/provider.hpp"
#include "vcluster/store/mpi.hpp"

namespace vcluster::testing {

/// A small but valid cluster config for tests to mutate.
inline ClusterConfig test_cluster_config() {
  ClusterConfig cfg;
  cfg.max_nodes = 10;
  cfg.min_nodes = 0;
  cfg.idle_timeout = 300'000;
  cfg.reconcile_interval = 10'000;
  cfg.node_flavor = "m1.quad";
  cfg.node_image = "centos7-hpc";
  cfg.cores_per_node = 4;
  cfg.mem_per_node_bytes = 16'000'000'000;
  cfg.rpeak_per_node_gflops = 40.0;
  cfg.host_mpi = store::MpiRuntime::parse("openmpi:3.1.0");
  return cfg;
}

/// Cloud double that plays back a scripted sequence of results, recording
/// every call. Runs dry loudly rather than improvising.
class ScriptedProvider : public provider::CloudProvider {
 public:
  struct Call {
    std::string op;  // "create" or "delete"
    std::string arg;  // instance name or id
    TimeMs at = 0;
  };

  void script_create(provider::ProviderErrorKind error, DurationMs latency = 30'000) {
    creates_.push_back({error, latency});
  }
  void script_delete(provider::ProviderErrorKind error) { deletes_.push_back(error); }

  provider::CreateResult create_instance(const provider::ConcreteInstanceRequest& req,
                                         TimeMs now) override {
    calls.push_back({"create", req.name, now});
    if (creates_.empty()) throw Error("ScriptedProvider: unscripted create call");
    auto [error, latency] = creates_.front();
    creates_.pop_front();
    provider::CreateResult res;
    res.error = error;
    if (res.ok()) {
      res.instance_id = "i-" + std::to_string(++counter_);
      res.active_at = now + latency;
    }
    return res;
  }

  provider::DeleteResult delete_instance(const std::string& id, TimeMs now) override {
    calls.push_back({"delete", id, now});
    if (deletes_.empty()) throw Error("ScriptedProvider: unscripted delete call");
    provider::DeleteResult res;
    res.error = deletes_.front();
    deletes_.pop_front();
    return res;
  }

  std::vector<Call> calls;

 private:
  std::deque<std::pair<provider::ProviderErrorKind, DurationMs>> creates_;
  std::deque<provider::ProviderErrorKind> deletes_;
  int counter_ = 0;
};

}  // namespace vcluster::testing
