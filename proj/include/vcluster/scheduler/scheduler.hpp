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
#include <string>
#include <vector>

#include "vcluster/core/cluster.hpp"
#include "vcluster/core/error.hpp"
#include "vcluster/core/types.hpp"

namespace vcluster {

struct JobTooLarge : Error {
  JobTooLarge(const std::string& job_id, int want, int max)
      : Error("job " + job_id + " needs " + std::to_string(want) + " nodes but max_nodes is " +
              std::to_string(max)) {}
};

struct NotRunning : Error {
  explicit NotRunning(const std::string& job_id) : Error("job " + job_id + " is not running") {}
};

/// Strict FIFO, whole-node scheduling: jobs dispatch in submission order,
/// each gets exclusive use of node_count Idle nodes, and a head job that
/// does not fit blocks everything behind it. No backfill by design; the
/// autoscaler grows the pool instead of the scheduler reordering jobs.
namespace scheduler {

struct Assignment {
  std::string job_id;
  std::vector<std::string> node_ids;
};

inline void submit(ClusterState& state, JobSpec spec) {
  if (spec.node_count > state.config().max_nodes) {
    throw JobTooLarge(spec.job_id, spec.node_count, state.config().max_nodes);
  }
  state.add_job(std::move(spec));
}

/// Total nodes the pending queue still needs, capped at the pool limit.
inline int pending_node_need(const ClusterState& state) {
  long need = 0;
  for (const std::string& id : state.queue().pending) {
    need += state.job(id).spec.node_count;
  }
  return static_cast<int>(std::min<long>(need, state.config().max_nodes));
}

/// Nodes the autoscaler should add right now: pending need minus supply
/// that is already on its way to Idle. Allocated nodes are excluded; they
/// come back on their own when their job ends.
inline int demand(const ClusterState& state) {
  int supply = state.count_nodes_in(
      {NodeState::Requested, NodeState::Provisioning, NodeState::Idle});
  return std::max(0, pending_node_need(state) - supply);
}

/// Idle nodes ordered longest-idle first (earliest idle_since, node id
/// breaking ties) so reuse concentrates on warm nodes and the coldest are
/// picked first, leaving recently freed nodes to age toward the idle
/// timeout last.
inline std::vector<std::string> idle_nodes_longest_first(const ClusterState& state) {
  std::vector<std::string> ids = state.node_ids_in(NodeState::Idle);
  std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
    TimeMs ia = *state.node(a).idle_since, ib = *state.node(b).idle_since;
    return ia != ib ? ia < ib : a < b;
  });
  return ids;
}

/// Dispatches from the head of the queue while the head job fits. Returns
/// the assignments made, in dispatch order.
inline std::vector<Assignment> try_schedule(ClusterState& state) {
  std::vector<Assignment> out;
  while (!state.queue().pending.empty()) {
    const std::string job_id = state.queue().pending.front();
    const int want = state.job(job_id).spec.node_count;
    std::vector<std::string> idle = idle_nodes_longest_first(state);
    if (static_cast<int>(idle.size()) < want) break;  // head-of-line blocking
    idle.resize(want);
    state.mark_job_running(job_id, idle);
    for (const std::string& node_id : idle) {
      state.transition_node(node_id, NodeState::Allocated, {{"job", job_id}});
    }
    out.push_back(Assignment{job_id, std::move(idle)});
  }
  return out;
}

/// Ends a running job and returns its nodes to the Idle pool.
inline void finish(ClusterState& state, const std::string& job_id, JobState final_state) {
  if (state.job(job_id).state != JobState::Running) throw NotRunning(job_id);
  state.mark_job_ended(job_id, final_state);
  for (const std::string& node_id : state.job(job_id).assigned_nodes) {
    state.transition_node(node_id, NodeState::Idle, {{"job", job_id}});
  }
}

}  // namespace scheduler
}  // namespace vcluster
