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

#include <fstream>
#include <sstream>
#include <string>

#include "vcluster/autoscaler/autoscaler.hpp"
#include "vcluster/config/text_format.hpp"
#include "vcluster/core/error.hpp"
#include "vcluster/core/types.hpp"
#include "vcluster/provider/provider.hpp"
#include "vcluster/provider/sim_provider.hpp"
#include "vcluster/store/derivation.hpp"

namespace vcluster::config {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading file: " + path);
  return buf.str();
}

/// [cluster] plus optional [storage]. Durations are spelled with _ms
/// suffixes in the file to keep the unit visible at the call site.
inline ClusterConfig load_cluster_config(const TextDoc& doc) {
  const Section& c = doc.single("cluster");
  ClusterConfig cfg;
  cfg.max_nodes = static_cast<int>(c.get_int("max_nodes"));
  cfg.min_nodes = static_cast<int>(c.get_int_or("min_nodes", 0));
  cfg.idle_timeout = c.get_int("idle_timeout_ms");
  cfg.reconcile_interval = c.get_int("reconcile_interval_ms");
  cfg.node_flavor = c.get_string("node_flavor");
  cfg.node_image = c.get_string("node_image");
  cfg.cores_per_node = static_cast<int>(c.get_int("cores_per_node"));
  cfg.mem_per_node_bytes = c.get_int("mem_per_node_bytes");
  cfg.rpeak_per_node_gflops = c.get_real("rpeak_per_node_gflops");
  cfg.host_mpi = store::MpiRuntime::parse(c.get_string("host_mpi"));
  if (const Section* s = doc.maybe_single("storage")) {
    cfg.storage.home_gb = s->get_int_or("home_gb", 0);
    cfg.storage.work_gb = s->get_int_or("work_gb", 0);
    cfg.storage.software_gb = s->get_int_or("software_gb", 0);
  }
  cfg.validate();
  return cfg;
}

/// [profile] for identity and network, [flavors] and [images] as literal
/// logical -> concrete maps.
inline provider::CloudProfile load_profile(const TextDoc& doc) {
  const Section& p = doc.single("profile");
  provider::CloudProfile out;
  out.provider_name = p.get_string("provider_name");
  out.network.name = p.get_string("network_name");
  out.network.explicit_dhcp = p.get_bool_or("explicit_dhcp", false);
  if (p.has("dhcp_servers")) out.network.dhcp_servers = p.get_list("dhcp_servers");
  for (const auto& key : doc.single("flavors").key_order) {
    out.flavor_map[key] = doc.single("flavors").get_string(key);
  }
  for (const auto& key : doc.single("images").key_order) {
    out.image_map[key] = doc.single("images").get_string(key);
  }
  out.validate();
  return out;
}

/// Optional [provider] section; everything has a default.
inline provider::SimProviderConfig load_sim_provider_config(const TextDoc& doc) {
  provider::SimProviderConfig cfg;
  if (const Section* p = doc.maybe_single("provider")) {
    cfg.seed = static_cast<std::uint64_t>(p->get_int_or("seed", 1));
    cfg.latency_min = p->get_int_or("latency_min_ms", cfg.latency_min);
    cfg.latency_max = p->get_int_or("latency_max_ms", cfg.latency_max);
    cfg.failure_rate = p->get_real_or("failure_rate", 0.0);
    if (p->has("capacity")) cfg.capacity = static_cast<int>(p->get_int("capacity"));
  }
  cfg.validate();
  return cfg;
}

/// Optional [retry] section; everything has a default.
inline autoscaler::RetryPolicy load_retry_policy(const TextDoc& doc) {
  autoscaler::RetryPolicy policy;
  if (const Section* r = doc.maybe_single("retry")) {
    policy.max_attempts = static_cast<int>(r->get_int_or("max_attempts", policy.max_attempts));
    policy.backoff_base = r->get_int_or("backoff_base_ms", policy.backoff_base);
    policy.backoff_factor = r->get_real_or("backoff_factor", policy.backoff_factor);
  }
  policy.validate();
  return policy;
}

/// [derivation] with name/builder/args, optional [config] (string values
/// only, to keep the hash input exact), optional [inputs] with a hash
/// list, and zero or more [source] blocks.
inline store::Derivation load_derivation(const TextDoc& doc) {
  const Section& d = doc.single("derivation");
  store::Derivation out;
  out.name = d.get_string("name");
  out.builder = d.get_string("builder");
  if (d.has("args")) out.args = d.get_list("args");

  if (const Section* c = doc.maybe_single("config")) {
    for (const auto& key : c->key_order) {
      const ConfigValue& v = c->get(key);
      if (!v.is_string()) {
        throw ParseError(v.line, "derivation config values must be quoted strings");
      }
      out.config[key] = v.as_string();
    }
  }
  if (const Section* in = doc.maybe_single("inputs")) {
    for (const std::string& hex : in->get_list("hashes")) {
      out.inputs.push_back(store::Digest::from_hex(hex));
    }
  }
  for (const Section* s : doc.named("source")) {
    store::SourceRef ref;
    ref.uri = s->get_string("uri");
    ref.digest = store::Digest::from_hex(s->get_string("sha256"));
    out.sources.push_back(std::move(ref));
  }
  out.validate();
  return out;
}

}  // namespace vcluster::config
