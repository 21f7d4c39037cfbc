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
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "vcluster/core/cluster.hpp"
#include "vcluster/core/error.hpp"
#include "vcluster/provider/provider.hpp"
#include "vcluster/scheduler/scheduler.hpp"

namespace vcluster::autoscaler {

struct RetryPolicy {
  int max_attempts = 3;
  DurationMs backoff_base = 2'000;
  double backoff_factor = 2.0;

  void validate() const {
    if (max_attempts < 1) throw Error("max_attempts must be >= 1");
    if (backoff_base <= 0) throw Error("backoff_base must be > 0");
    if (backoff_factor < 1.0) throw Error("backoff_factor must be >= 1.0");
  }

  /// Delay before the next try after failed attempt number `attempt` (1-based):
  /// base * factor^(attempt-1).
  DurationMs backoff_after(int attempt) const {
    if (attempt < 1) throw Error("attempt numbers are 1-based");
    double d = static_cast<double>(backoff_base) *
               std::pow(backoff_factor, static_cast<double>(attempt - 1));
    return static_cast<DurationMs>(d);
  }
};

struct ScaleAction {
  enum class Kind { CreateNode, TerminateNode };
  Kind kind = Kind::CreateNode;
  std::string node_id;  // empty for CreateNode

  bool operator==(const ScaleAction&) const = default;
};

/// One reconcile pass, planning only. Reads the cluster, returns the
/// actions that would bring supply in line with demand:
///
///   1. every Failed node gets a TerminateNode (cleanup),
///   2. CreateNode actions for max(demand, min_nodes floor), capped so the
///      live count never exceeds max_nodes,
///   3. TerminateNode for Idle nodes past the idle timeout, longest idle
///      first, but never ones the pending queue will need and never below
///      min_nodes.
///
/// Creates come first, then terminations in node id order, so applying the
/// plan touches the provider in a deterministic sequence.
///
/// `min_nodes_override` substitutes for the configured floor when set; the
/// simulator drops the floor to zero during shutdown so the pool can drain.
inline std::vector<ScaleAction> reconcile(const ClusterState& state, TimeMs now,
                                          std::optional<int> min_nodes_override = std::nullopt) {
  const ClusterConfig& cfg = state.config();
  const int min_nodes = min_nodes_override.value_or(cfg.min_nodes);
  std::vector<ScaleAction> plan;

  const int demand = scheduler::demand(state);
  const int live = state.live_node_count();
  const int floor_gap = std::max(0, min_nodes - live);
  const int creates = std::min(std::max(demand, floor_gap), std::max(0, cfg.max_nodes - live));
  for (int i = 0; i < creates; ++i) {
    plan.push_back(ScaleAction{ScaleAction::Kind::CreateNode, ""});
  }

  // Idle nodes the queue still needs must stay, even past their timeout.
  const int incoming = state.count_nodes_in({NodeState::Requested, NodeState::Provisioning});
  const int keep_for_jobs = std::max(0, scheduler::pending_node_need(state) - incoming);
  const std::vector<std::string> idle = scheduler::idle_nodes_longest_first(state);
  int reclaimable = std::max(0, static_cast<int>(idle.size()) - keep_for_jobs);
  reclaimable = std::min(reclaimable, std::max(0, live + creates - min_nodes));

  std::vector<std::string> doomed = state.node_ids_in(NodeState::Failed);
  for (const std::string& id : idle) {
    if (reclaimable == 0) break;
    if (now - *state.node(id).idle_since >= cfg.idle_timeout) {
      doomed.push_back(id);
      --reclaimable;
    }
  }
  std::sort(doomed.begin(), doomed.end());
  for (std::string& id : doomed) {
    plan.push_back(ScaleAction{ScaleAction::Kind::TerminateNode, std::move(id)});
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Plan application with retry

enum class OpKind { Create, Delete };

/// A provider call that failed transiently and is scheduled to run again.
/// The node sits in Requested (create) or Terminating (delete) meanwhile,
/// which keeps it counted as supply so reconcile does not double up.
struct PendingAttempt {
  std::string node_id;
  OpKind op = OpKind::Create;
  int attempt = 2;  // number the retry will be, 1-based
  TimeMs at = 0;    // earliest time to run it
};

enum class ApplyStatus { Succeeded, RetryScheduled, Failed };

struct ApplyOutcome {
  std::string node_id;
  OpKind op = OpKind::Create;
  ApplyStatus status = ApplyStatus::Succeeded;
  int attempts_used = 1;
  TimeMs active_at = 0;  // create success only: when the node will boot
};

struct AttemptResult {
  ApplyOutcome outcome;
  std::optional<PendingAttempt> retry;
};

/// Everything apply() needs besides the cluster itself.
struct ProviderBinding {
  provider::CloudProvider& cloud;
  provider::CloudProfile profile;
  RetryPolicy retry;
  std::string cluster_id = "vc0";
};

namespace detail {

inline AttemptResult attempt_create(ClusterState& state, const ProviderBinding& bind,
                                    const std::string& node_id, int attempt) {
  AttemptResult res;
  res.outcome = ApplyOutcome{node_id, OpKind::Create, ApplyStatus::Succeeded, attempt, 0};
  NodeRecord& rec = state.node(node_id);
  auto req = provider::resolve(state.config(), bind.profile, bind.cluster_id, node_id);
  provider::CreateResult cr = bind.cloud.create_instance(req, state.now());
  if (cr.ok()) {
    rec.instance_id = cr.instance_id;
    state.transition_node(node_id, NodeState::Provisioning,
                          {{"attempts", std::to_string(attempt)}});
    res.outcome.active_at = cr.active_at;
    return res;
  }
  if (attempt < bind.retry.max_attempts) {
    res.outcome.status = ApplyStatus::RetryScheduled;
    res.retry = PendingAttempt{node_id, OpKind::Create, attempt + 1,
                               state.now() + bind.retry.backoff_after(attempt)};
    return res;
  }
  // Exhausted before the provider ever delivered: the node has no instance
  // and no log presence. The next reconcile pass collects the record.
  res.outcome.status = ApplyStatus::Failed;
  state.transition_node(node_id, NodeState::Failed,
                        {{"attempts", std::to_string(attempt)},
                         {"reason", to_string(cr.error)}});
  return res;
}

inline AttemptResult attempt_delete(ClusterState& state, const ProviderBinding& bind,
                                    const std::string& node_id, int attempt) {
  AttemptResult res;
  res.outcome = ApplyOutcome{node_id, OpKind::Delete, ApplyStatus::Succeeded, attempt, 0};
  NodeRecord& rec = state.node(node_id);
  if (!rec.instance_id) {
    // Nothing exists cloud-side, so there is nothing to free.
    state.transition_node(node_id, NodeState::Terminated, {});
    return res;
  }
  provider::DeleteResult dr = bind.cloud.delete_instance(*rec.instance_id, state.now());
  if (dr.ok() || dr.error == provider::ProviderErrorKind::UnknownInstance) {
    // UnknownInstance means the cloud has no such resource; either way the
    // instance is not ours anymore and nothing leaks.
    state.transition_node(node_id, NodeState::Terminated,
                          {{"attempts", std::to_string(attempt)}});
    return res;
  }
  if (attempt < bind.retry.max_attempts) {
    res.outcome.status = ApplyStatus::RetryScheduled;
    res.retry = PendingAttempt{node_id, OpKind::Delete, attempt + 1,
                               state.now() + bind.retry.backoff_after(attempt)};
    return res;
  }
  res.outcome.status = ApplyStatus::Failed;
  state.transition_node(node_id, NodeState::Failed,
                        {{"attempts", std::to_string(attempt)},
                         {"reason", to_string(dr.error)}});
  return res;
}

}  // namespace detail

struct ApplyResult {
  std::vector<ApplyOutcome> outcomes;
  std::vector<PendingAttempt> retries;
};

/// Executes a reconcile plan: first provider calls for creates, then the
/// drain/terminate sequences. Transient failures come back as retries for
/// the caller to run at their scheduled time via continue_attempt().
inline ApplyResult apply(ClusterState& state, const std::vector<ScaleAction>& plan,
                         const ProviderBinding& bind) {
  bind.retry.validate();
  ApplyResult result;
  auto take = [&](AttemptResult ar) {
    result.outcomes.push_back(ar.outcome);
    if (ar.retry) result.retries.push_back(*ar.retry);
  };
  for (const ScaleAction& a : plan) {
    if (a.kind == ScaleAction::Kind::CreateNode) {
      NodeRecord& rec = state.add_node();
      take(detail::attempt_create(state, bind, rec.node_id, 1));
    } else {
      NodeRecord& rec = state.node(a.node_id);
      if (rec.state == NodeState::Idle) {
        state.transition_node(a.node_id, NodeState::Draining, {});
        state.transition_node(a.node_id, NodeState::Terminating, {});
      } else if (rec.state == NodeState::Failed) {
        state.transition_node(a.node_id, NodeState::Terminating, {});
      } else {
        throw Error("node " + a.node_id + " cannot be terminated from state " +
                    to_string(rec.state));
      }
      take(detail::attempt_delete(state, bind, a.node_id, 1));
    }
  }
  return result;
}

/// Runs one scheduled retry. Returns the outcome plus the next retry if
/// this attempt also failed transiently with attempts remaining.
inline AttemptResult continue_attempt(ClusterState& state, const PendingAttempt& pending,
                                      const ProviderBinding& bind) {
  if (pending.op == OpKind::Create) {
    return detail::attempt_create(state, bind, pending.node_id, pending.attempt);
  }
  return detail::attempt_delete(state, bind, pending.node_id, pending.attempt);
}

}  // namespace vcluster::autoscaler
