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
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "vcluster/core/error.hpp"
#include "vcluster/core/events.hpp"
#include "vcluster/core/time.hpp"
#include "vcluster/core/types.hpp"
#include "vcluster/scheduler/queue_state.hpp"

namespace vcluster {

/// Whole-cluster mutable state plus the append-only event log. Every state
/// change goes through the transition helpers here so the log stays the
/// authoritative record: usage accounting replays it without consulting the
/// in-memory maps.
class ClusterState {
 public:
  explicit ClusterState(ClusterConfig config) : config_(std::move(config)) {
    config_.validate();
  }

  VirtualClock& clock() { return clock_; }
  const VirtualClock& clock() const { return clock_; }
  TimeMs now() const { return clock_.now(); }

  const ClusterConfig& config() const { return config_; }
  const std::map<std::string, NodeRecord>& nodes() const { return nodes_; }
  const std::map<std::string, JobRecord>& jobs() const { return jobs_; }
  const QueueState& queue() const { return queue_; }
  QueueState& queue() { return queue_; }
  const EventLog& log() const { return log_; }

  NodeRecord& node(const std::string& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error("unknown node: " + id);
    return it->second;
  }
  const NodeRecord& node(const std::string& id) const {
    return const_cast<ClusterState*>(this)->node(id);
  }

  JobRecord& job(const std::string& id) {
    auto it = jobs_.find(id);
    if (it == jobs_.end()) throw Error("unknown job: " + id);
    return it->second;
  }
  const JobRecord& job(const std::string& id) const {
    return const_cast<ClusterState*>(this)->job(id);
  }

  // -------------------------------------------------------------------------
  // Nodes

  /// Creates a Requested node record. No event yet: the log records a node
  /// only once the provider accepts it (NodeRequested on the Provisioning
  /// edge), so nodes whose create calls never succeed do not appear.
  NodeRecord& add_node() {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "n%05d", ++node_counter_);
    NodeRecord rec;
    rec.node_id = buf;
    rec.flavor = config_.node_flavor;
    rec.image = config_.node_image;
    rec.state = NodeState::Requested;
    rec.created_at = now();
    auto [it, inserted] = nodes_.emplace(rec.node_id, std::move(rec));
    if (!inserted) throw Error("duplicate node id");
    return it->second;
  }

  /// Applies one state-machine edge, keeps the idle/terminated bookkeeping
  /// consistent, and appends the milestone event for edges that have one.
  /// `extra` is merged into the event payload (attempts, reasons, ...).
  ///
  /// A node enters the log only if the provider delivered an instance for
  /// it (instance_id set, which happens right before the Provisioning
  /// edge). Records whose create calls never succeeded pass through
  /// Failed/Terminated silently; they were never billable.
  void transition_node(const std::string& node_id, NodeState to,
                       std::map<std::string, std::string> extra = {}) {
    NodeRecord& n = node(node_id);
    if (!is_node_transition_legal(n.state, to)) {
      throw IllegalTransition(node_id, n.state, to);
    }
    NodeState from = n.state;
    n.state = to;
    n.idle_since = (to == NodeState::Idle) ? std::optional<TimeMs>(now()) : std::nullopt;
    if (to == NodeState::Terminated) n.terminated_at = now();
    if (!n.instance_id) return;

    extra.emplace("node", node_id);
    switch (to) {
      case NodeState::Provisioning:
        if (n.instance_id) extra.emplace("instance", *n.instance_id);
        log_.append(now(), EventKind::NodeRequested, std::move(extra));
        break;
      case NodeState::Idle:
        log_.append(now(),
                    from == NodeState::Provisioning ? EventKind::NodeActive : EventKind::NodeIdle,
                    std::move(extra));
        break;
      case NodeState::Allocated:
        log_.append(now(), EventKind::NodeAllocated, std::move(extra));
        break;
      case NodeState::Terminated:
        log_.append(now(), EventKind::NodeTerminated, std::move(extra));
        break;
      case NodeState::Failed:
        log_.append(now(), EventKind::NodeFailed, std::move(extra));
        break;
      case NodeState::Requested:
      case NodeState::Draining:
      case NodeState::Terminating:
        break;  // internal edges, not usage milestones
    }
  }

  int live_node_count() const {
    int n = 0;
    for (const auto& [id, rec] : nodes_) n += is_node_live(rec.state) ? 1 : 0;
    return n;
  }

  int count_nodes_in(std::initializer_list<NodeState> states) const {
    int n = 0;
    for (const auto& [id, rec] : nodes_) {
      for (NodeState s : states) n += (rec.state == s) ? 1 : 0;
    }
    return n;
  }

  std::vector<std::string> node_ids_in(NodeState s) const {
    std::vector<std::string> out;
    for (const auto& [id, rec] : nodes_) {
      if (rec.state == s) out.push_back(id);
    }
    return out;  // map order, so already ascending by id
  }

  // -------------------------------------------------------------------------
  // Jobs

  /// Validates and enqueues a job. Pending order is (submit_time, job_id);
  /// submissions arriving out of order still land in dispatch order.
  JobRecord& add_job(JobSpec spec) {
    spec.validate();
    if (jobs_.count(spec.job_id)) throw Error("duplicate job id: " + spec.job_id);
    std::map<std::string, std::string> payload{
        {"job", spec.job_id},
        {"nodes", std::to_string(spec.node_count)},
        {"tasks", std::to_string(spec.tasks_per_node)},
    };
    if (!spec.image.pinned) payload.emplace("unpinned", "1");

    JobRecord rec;
    rec.spec = std::move(spec);
    auto [it, inserted] = jobs_.emplace(rec.spec.job_id, std::move(rec));
    const JobSpec& s = it->second.spec;

    auto pos = std::find_if(queue_.pending.begin(), queue_.pending.end(),
                            [&](const std::string& other_id) {
                              const JobSpec& o = jobs_.at(other_id).spec;
                              return s.submit_time < o.submit_time ||
                                     (s.submit_time == o.submit_time && s.job_id < o.job_id);
                            });
    queue_.pending.insert(pos, s.job_id);
    log_.append(now(), EventKind::JobSubmitted, std::move(payload));
    return it->second;
  }

  void mark_job_running(const std::string& job_id, std::vector<std::string> assigned) {
    JobRecord& j = job(job_id);
    if (j.state != JobState::Pending) throw Error("job " + job_id + " is not pending");
    if (static_cast<int>(assigned.size()) != j.spec.node_count) {
      throw Error("job " + job_id + " assignment size mismatch");
    }
    queue_.remove_pending(job_id);
    queue_.running.insert(job_id);
    j.state = JobState::Running;
    j.assigned_nodes = std::move(assigned);
    j.start_time = now();
    log_.append(now(), EventKind::JobStarted,
                {{"job", job_id}, {"wait", std::to_string(now() - j.spec.submit_time)}});
  }

  void mark_job_ended(const std::string& job_id, JobState final_state) {
    JobRecord& j = job(job_id);
    if (j.state != JobState::Running) throw Error("job " + job_id + " is not running");
    if (!is_terminal(final_state)) throw Error("job end state must be terminal");
    queue_.running.erase(job_id);
    j.state = final_state;
    j.end_time = now();
    log_.append(now(), EventKind::JobEnded, {{"job", job_id}, {"state", to_string(final_state)}});
  }

  void emit_reconcile(std::map<std::string, std::string> payload) {
    log_.append(now(), EventKind::ReconcileRan, std::move(payload));
  }

 private:
  VirtualClock clock_;
  ClusterConfig config_;
  std::map<std::string, NodeRecord> nodes_;
  std::map<std::string, JobRecord> jobs_;
  QueueState queue_;
  EventLog log_;
  int node_counter_ = 0;
};

}  // namespace vcluster
