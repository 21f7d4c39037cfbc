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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vcluster/core/error.hpp"
#include "vcluster/core/time.hpp"
#include "vcluster/core/types.hpp"

namespace vcluster::provider {

struct UnmappedName : Error {
  using Error::Error;
};

/// Private-network parameters for worker instances. Some clouds hand out
/// addresses themselves; others need the tenant to run DHCP and say so.
struct NetworkSpec {
  std::string name;
  bool explicit_dhcp = false;
  std::vector<std::string> dhcp_servers;

  bool operator==(const NetworkSpec&) const = default;

  void validate() const {
    if (name.empty()) throw Error("network name must not be empty");
    if (explicit_dhcp && dhcp_servers.empty()) {
      throw Error("explicit_dhcp requires at least one dhcp server");
    }
    if (!explicit_dhcp && !dhcp_servers.empty()) {
      throw Error("dhcp servers listed but explicit_dhcp is off");
    }
  }
};

/// Everything that changes when the same cluster moves to a different
/// cloud: how logical flavor and image names map to that cloud's catalog,
/// and how its private network behaves. Cluster configs stay portable by
/// only ever using the logical names.
struct CloudProfile {
  std::string provider_name;
  std::map<std::string, std::string> flavor_map;  // logical -> concrete
  std::map<std::string, std::string> image_map;   // logical -> concrete
  NetworkSpec network;

  void validate() const {
    if (provider_name.empty()) throw Error("provider_name must not be empty");
    if (flavor_map.empty()) throw Error("flavor_map must not be empty");
    if (image_map.empty()) throw Error("image_map must not be empty");
    std::set<std::string> seen;
    for (const auto& [logical, concrete] : flavor_map) {
      if (logical.empty() || concrete.empty()) throw Error("flavor names must not be empty");
      if (!seen.insert(concrete).second) {
        throw Error("flavor_map is not injective: " + concrete + " mapped twice");
      }
    }
    for (const auto& [logical, concrete] : image_map) {
      if (logical.empty() || concrete.empty()) throw Error("image names must not be empty");
    }
    network.validate();
  }
};

/// A fully resolved create request: all names are in the target cloud's
/// vocabulary, nothing logical left.
struct ConcreteInstanceRequest {
  std::string name;
  std::string flavor;
  std::string image;
  NetworkSpec network;
  std::map<std::string, std::string> metadata;

  bool operator==(const ConcreteInstanceRequest&) const = default;
};

/// Maps a cluster's logical node flavor and image through a profile.
/// Throws UnmappedName when the profile has no entry, so a config written
/// for one cloud fails loudly instead of launching the wrong instance type.
inline ConcreteInstanceRequest resolve(const ClusterConfig& cfg, const CloudProfile& profile,
                                       const std::string& cluster_id = "vc0",
                                       const std::string& node_id = "") {
  auto flavor = profile.flavor_map.find(cfg.node_flavor);
  if (flavor == profile.flavor_map.end()) {
    throw UnmappedName("profile " + profile.provider_name + " has no flavor mapping for '" +
                       cfg.node_flavor + "'");
  }
  auto image = profile.image_map.find(cfg.node_image);
  if (image == profile.image_map.end()) {
    throw UnmappedName("profile " + profile.provider_name + " has no image mapping for '" +
                       cfg.node_image + "'");
  }
  ConcreteInstanceRequest req;
  req.name = node_id.empty() ? cluster_id : cluster_id + "-" + node_id;
  req.flavor = flavor->second;
  req.image = image->second;
  req.network = profile.network;
  req.metadata = {{"cluster", cluster_id}, {"role", "worker"}};
  return req;
}

// ---------------------------------------------------------------------------
// Provider call results

enum class ProviderErrorKind {
  None,
  Transient,          // worth retrying
  CapacityExceeded,   // pool is full, retrying later may help
  UnknownInstance     // caller named an instance that never existed
};

inline std::string to_string(ProviderErrorKind k) {
  switch (k) {
    case ProviderErrorKind::None: return "None";
    case ProviderErrorKind::Transient: return "Transient";
    case ProviderErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ProviderErrorKind::UnknownInstance: return "UnknownInstance";
  }
  return "?";
}

struct CreateResult {
  std::string instance_id;
  TimeMs active_at = 0;  // when the instance finishes booting
  ProviderErrorKind error = ProviderErrorKind::None;

  bool ok() const { return error == ProviderErrorKind::None; }
};

struct DeleteResult {
  ProviderErrorKind error = ProviderErrorKind::None;

  bool ok() const { return error == ProviderErrorKind::None; }
};

enum class InstanceStatus { Booting, Active };

struct InstanceInfo {
  std::string instance_id;
  std::string name;
  TimeMs active_at = 0;
  bool alive = true;
};

/// The narrow waist between the autoscaler and any cloud. Calls are
/// synchronous control-plane operations; booting happens asynchronously and
/// is reported through `active_at`. Implementations never throw for cloud
/// failures, they return an error kind the retry machinery understands.
class CloudProvider {
 public:
  virtual ~CloudProvider() = default;
  virtual CreateResult create_instance(const ConcreteInstanceRequest& req, TimeMs now) = 0;
  virtual DeleteResult delete_instance(const std::string& instance_id, TimeMs now) = 0;
};

}  // namespace vcluster::provider
