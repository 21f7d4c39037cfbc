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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vcluster/core/error.hpp"
#include "vcluster/core/time.hpp"
#include "vcluster/store/image.hpp"
#include "vcluster/store/mpi.hpp"

namespace vcluster {

// ---------------------------------------------------------------------------
// Job lifecycle

enum class JobState { Pending, Running, Completed, Failed, TimedOut };

inline bool is_terminal(JobState s) {
  return s == JobState::Completed || s == JobState::Failed || s == JobState::TimedOut;
}

inline std::string to_string(JobState s) {
  switch (s) {
    case JobState::Pending: return "Pending";
    case JobState::Running: return "Running";
    case JobState::Completed: return "Completed";
    case JobState::Failed: return "Failed";
    case JobState::TimedOut: return "TimedOut";
  }
  return "?";
}

/// A multi-node batch job request: `node_count` workers held simultaneously,
/// `tasks_per_node` ranks on each, launched from a container image.
struct JobSpec {
  std::string job_id;
  int node_count = 1;
  int tasks_per_node = 1;
  DurationMs walltime_limit = 0;
  store::ImageRef image;
  std::string command;
  TimeMs submit_time = 0;

  int total_procs() const { return node_count * tasks_per_node; }

  void validate() const {
    if (job_id.empty()) throw Error("job id must not be empty");
    if (node_count < 1) throw Error("job " + job_id + ": node_count must be >= 1");
    if (tasks_per_node < 1) throw Error("job " + job_id + ": tasks_per_node must be >= 1");
    if (walltime_limit <= 0) throw Error("job " + job_id + ": walltime_limit must be > 0");
    image.validate();
  }
};

struct JobRecord {
  JobSpec spec;
  JobState state = JobState::Pending;
  std::vector<std::string> assigned_nodes;  // empty unless Running
  std::optional<TimeMs> start_time;
  std::optional<TimeMs> end_time;
};

// ---------------------------------------------------------------------------
// Node lifecycle

enum class NodeState {
  Requested,     // record exists, provider call not yet acknowledged
  Provisioning,  // provider accepted the request, instance booting
  Idle,          // schedulable
  Allocated,     // running part of a job
  Draining,      // reserved for termination, hidden from the scheduler
  Terminating,   // delete issued, awaiting acknowledgement
  Terminated,    // gone (terminal)
  Failed         // provider gave up on it; cleaned up by the next reconcile
};

inline std::string to_string(NodeState s) {
  switch (s) {
    case NodeState::Requested: return "Requested";
    case NodeState::Provisioning: return "Provisioning";
    case NodeState::Idle: return "Idle";
    case NodeState::Allocated: return "Allocated";
    case NodeState::Draining: return "Draining";
    case NodeState::Terminating: return "Terminating";
    case NodeState::Terminated: return "Terminated";
    case NodeState::Failed: return "Failed";
  }
  return "?";
}

// Legal edges: Requested->Provisioning->Idle<->Allocated,
// Idle->Draining->Terminating->Terminated, any non-terminal state ->Failed,
// and Failed->Terminating so failed nodes can be reclaimed.
inline bool is_node_transition_legal(NodeState from, NodeState to) {
  if (to == NodeState::Failed) return from != NodeState::Terminated && from != NodeState::Failed;
  switch (from) {
    case NodeState::Requested: return to == NodeState::Provisioning;
    case NodeState::Provisioning: return to == NodeState::Idle;
    case NodeState::Idle: return to == NodeState::Allocated || to == NodeState::Draining;
    case NodeState::Allocated: return to == NodeState::Idle;
    case NodeState::Draining: return to == NodeState::Terminating;
    case NodeState::Terminating: return to == NodeState::Terminated;
    case NodeState::Failed: return to == NodeState::Terminating;
    case NodeState::Terminated: return false;
  }
  return false;
}

struct IllegalTransition : Error {
  NodeState from, to;
  IllegalTransition(const std::string& node_id, NodeState f, NodeState t)
      : Error("node " + node_id + ": illegal transition " + to_string(f) + " -> " + to_string(t)),
        from(f),
        to(t) {}
};

/// One ephemeral worker instance.
struct NodeRecord {
  std::string node_id;
  std::optional<std::string> instance_id;  // provider-assigned once created
  std::string flavor;                      // logical flavor name
  std::string image;                       // logical boot image name
  NodeState state = NodeState::Requested;
  TimeMs created_at = 0;
  std::optional<TimeMs> idle_since;
  std::optional<TimeMs> terminated_at;
};

/// Nodes that occupy cluster capacity: everything except Terminated and
/// Failed. Failed nodes are dead weight awaiting cleanup; the demand
/// calculation re-requests their capacity.
inline bool is_node_live(NodeState s) {
  return s != NodeState::Terminated && s != NodeState::Failed;
}

// ---------------------------------------------------------------------------
// Cluster configuration

/// The three shared filesystem spaces every worker sees. Metadata only:
/// validated and reported, never mounted.
struct SharedStorageSpec {
  std::int64_t home_gb = 0;
  std::int64_t work_gb = 0;
  std::int64_t software_gb = 0;

  void validate() const {
    if (home_gb < 0 || work_gb < 0 || software_gb < 0) {
      throw Error("storage sizes must be non-negative");
    }
  }
};

struct ClusterConfig {
  int max_nodes = 1;
  int min_nodes = 0;
  DurationMs idle_timeout = 300'000;
  DurationMs reconcile_interval = 10'000;
  std::string node_flavor;
  std::string node_image;
  int cores_per_node = 1;
  std::int64_t mem_per_node_bytes = 0;
  double rpeak_per_node_gflops = 0.0;
  SharedStorageSpec storage;
  store::MpiRuntime host_mpi;

  void validate() const {
    if (max_nodes < 1) throw Error("max_nodes must be >= 1");
    if (min_nodes < 0) throw Error("min_nodes must be >= 0");
    if (min_nodes > max_nodes) throw Error("min_nodes must be <= max_nodes");
    if (idle_timeout <= 0) throw Error("idle_timeout must be > 0");
    if (reconcile_interval <= 0) throw Error("reconcile_interval must be > 0");
    if (node_flavor.empty()) throw Error("node_flavor must be set");
    if (node_image.empty()) throw Error("node_image must be set");
    if (cores_per_node < 1) throw Error("cores_per_node must be >= 1");
    if (mem_per_node_bytes < 1) throw Error("mem_per_node_bytes must be >= 1");
    if (rpeak_per_node_gflops <= 0.0) throw Error("rpeak_per_node_gflops must be > 0");
    storage.validate();
  }
};

}  // namespace vcluster
