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

#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "helpers.hpp"
#include "vcluster/autoscaler/autoscaler.hpp"
#include "vcluster/core/usage.hpp"
#include "vcluster/provider/example_profiles.hpp"
#include "vcluster/store/image.hpp"

using namespace vcluster;
using autoscaler::ScaleAction;
using provider::ProviderErrorKind;

namespace {

JobSpec make_job(const std::string& id, int nodes, TimeMs submit = 0) {
  JobSpec spec;
  spec.job_id = id;
  spec.node_count = nodes;
  spec.tasks_per_node = 2;
  spec.walltime_limit = 600'000;
  spec.image = store::ImageRef::parse("hub/app:latest");
  spec.submit_time = submit;
  return spec;
}

std::string add_idle_node(ClusterState& state) {
  NodeRecord& n = state.add_node();
  n.instance_id = "i-" + n.node_id;
  state.transition_node(n.node_id, NodeState::Provisioning);
  state.transition_node(n.node_id, NodeState::Idle);
  return n.node_id;
}

int count_kind(const std::vector<ScaleAction>& plan, ScaleAction::Kind kind) {
  int n = 0;
  for (const auto& a : plan) n += a.kind == kind;
  return n;
}

autoscaler::ProviderBinding bind_to(provider::CloudProvider& cloud) {
  return autoscaler::ProviderBinding{cloud, provider::jetstream_like_profile(),
                                     autoscaler::RetryPolicy{}, "vc0"};
}

}  // namespace

TEST_CASE("backoff grows geometrically from the base", "[autoscaler]") {
  autoscaler::RetryPolicy policy;  // 2000ms base, factor 2
  REQUIRE(policy.backoff_after(1) == 2'000);
  REQUIRE(policy.backoff_after(2) == 4'000);
  REQUIRE(policy.backoff_after(3) == 8'000);
  REQUIRE_THROWS_AS(policy.backoff_after(0), Error);

  autoscaler::RetryPolicy bad;
  bad.backoff_factor = 0.5;
  REQUIRE_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("reconcile creates exactly the demanded nodes, capped by max", "[autoscaler]") {
  ClusterState state(testing::test_cluster_config());
  scheduler::submit(state, make_job("a", 4));
  auto plan = autoscaler::reconcile(state, state.now());
  REQUIRE(plan.size() == 4);
  REQUIRE(count_kind(plan, ScaleAction::Kind::CreateNode) == 4);

  scheduler::submit(state, make_job("b", 8));
  plan = autoscaler::reconcile(state, state.now());
  REQUIRE(count_kind(plan, ScaleAction::Kind::CreateNode) == 10);  // 12 wanted, 10 allowed

  // once nodes are requested they count as supply and are not re-planned
  for (int i = 0; i < 10; ++i) state.add_node();
  plan = autoscaler::reconcile(state, state.now());
  REQUIRE(plan.empty());
}

TEST_CASE("reconcile respects the min_nodes floor both ways", "[autoscaler]") {
  ClusterConfig cfg = testing::test_cluster_config();
  cfg.min_nodes = 2;
  ClusterState state(cfg);

  // empty cluster, no demand: grow to the floor
  auto plan = autoscaler::reconcile(state, state.now());
  REQUIRE(count_kind(plan, ScaleAction::Kind::CreateNode) == 2);

  // two idle nodes far past their timeout keep the floor alive
  add_idle_node(state);
  add_idle_node(state);
  state.clock().advance_to(3'600'000);
  plan = autoscaler::reconcile(state, state.now());
  REQUIRE(plan.empty());

  // an override of zero (shutdown) releases them
  plan = autoscaler::reconcile(state, state.now(), 0);
  REQUIRE(count_kind(plan, ScaleAction::Kind::TerminateNode) == 2);
}

TEST_CASE("idle reclaim takes timed-out nodes, longest idle first", "[autoscaler]") {
  ClusterState state(testing::test_cluster_config());  // idle_timeout 300s
  state.clock().advance_to(1'000);
  std::string oldest = add_idle_node(state);
  state.clock().advance_to(100'000);
  std::string younger = add_idle_node(state);
  state.clock().advance_to(350'000);  // oldest idle 349s, younger 250s

  auto plan = autoscaler::reconcile(state, state.now());
  REQUIRE(plan.size() == 1);
  REQUIRE(plan[0] == ScaleAction{ScaleAction::Kind::TerminateNode, oldest});

  state.clock().advance_to(450'000);  // both timed out now
  plan = autoscaler::reconcile(state, state.now());
  REQUIRE(plan.size() == 2);
  REQUIRE(count_kind(plan, ScaleAction::Kind::TerminateNode) == 2);
}

TEST_CASE("idle nodes the queue needs are kept past their timeout", "[autoscaler]") {
  ClusterState state(testing::test_cluster_config());
  std::string a = add_idle_node(state);
  std::string b = add_idle_node(state);
  state.clock().advance_to(400'000);  // both long past timeout

  // head job needs 3: demand 1, and both idle nodes are spoken for
  scheduler::submit(state, make_job("j", 3, 400'000));
  auto plan = autoscaler::reconcile(state, state.now());
  REQUIRE(count_kind(plan, ScaleAction::Kind::CreateNode) == 1);
  REQUIRE(count_kind(plan, ScaleAction::Kind::TerminateNode) == 0);
}

TEST_CASE("failed nodes are planned for cleanup", "[autoscaler]") {
  ClusterState state(testing::test_cluster_config());
  std::string a = add_idle_node(state);
  state.transition_node(a, NodeState::Failed, {{"reason", "Transient"}});
  auto plan = autoscaler::reconcile(state, state.now());
  REQUIRE(plan.size() == 1);
  REQUIRE(plan[0] == ScaleAction{ScaleAction::Kind::TerminateNode, a});
}

TEST_CASE("apply walks created nodes into Provisioning", "[autoscaler]") {
  ClusterState state(testing::test_cluster_config());
  testing::ScriptedProvider cloud;
  cloud.script_create(ProviderErrorKind::None, 31'000);
  cloud.script_create(ProviderErrorKind::None, 35'000);
  auto bind = bind_to(cloud);

  std::vector<ScaleAction> plan = {{ScaleAction::Kind::CreateNode, ""},
                                   {ScaleAction::Kind::CreateNode, ""}};
  auto result = autoscaler::apply(state, plan, bind);
  REQUIRE(result.outcomes.size() == 2);
  REQUIRE(result.retries.empty());
  REQUIRE(result.outcomes[0].status == autoscaler::ApplyStatus::Succeeded);
  REQUIRE(result.outcomes[0].active_at == 31'000);
  REQUIRE(state.node("n00001").state == NodeState::Provisioning);
  REQUIRE(state.node("n00001").instance_id == "i-1");
  REQUIRE(cloud.calls.size() == 2);
  REQUIRE(cloud.calls[0].arg == "vc0-n00001");  // resolved instance name
}

TEST_CASE("transient create failures schedule backoff retries", "[autoscaler]") {
  ClusterState state(testing::test_cluster_config());
  state.clock().advance_to(10'000);
  testing::ScriptedProvider cloud;
  cloud.script_create(ProviderErrorKind::Transient);
  auto bind = bind_to(cloud);

  auto result = autoscaler::apply(state, {{ScaleAction::Kind::CreateNode, ""}}, bind);
  REQUIRE(result.outcomes[0].status == autoscaler::ApplyStatus::RetryScheduled);
  REQUIRE(result.retries.size() == 1);
  REQUIRE(result.retries[0].node_id == "n00001");
  REQUIRE(result.retries[0].attempt == 2);
  REQUIRE(result.retries[0].at == 12'000);  // now + 2000ms backoff
  REQUIRE(state.node("n00001").state == NodeState::Requested);

  // second attempt fails too: backoff doubles
  state.clock().advance_to(12'000);
  cloud.script_create(ProviderErrorKind::CapacityExceeded);
  auto second = autoscaler::continue_attempt(state, result.retries[0], bind);
  REQUIRE(second.retry.has_value());
  REQUIRE(second.retry->attempt == 3);
  REQUIRE(second.retry->at == 16'000);  // now + 4000ms

  // third attempt succeeds
  state.clock().advance_to(16'000);
  cloud.script_create(ProviderErrorKind::None, 30'000);
  auto third = autoscaler::continue_attempt(state, *second.retry, bind);
  REQUIRE(third.outcome.status == autoscaler::ApplyStatus::Succeeded);
  REQUIRE(third.outcome.attempts_used == 3);
  REQUIRE_FALSE(third.retry.has_value());
  REQUIRE(state.node("n00001").state == NodeState::Provisioning);
  // the log records the attempt count on the milestone
  REQUIRE(state.log().events().back().payload.at("attempts") == "3");
}

TEST_CASE("create retries exhaust into a silent Failed record", "[autoscaler]") {
  ClusterState state(testing::test_cluster_config());
  testing::ScriptedProvider cloud;
  auto bind = bind_to(cloud);
  cloud.script_create(ProviderErrorKind::Transient);
  auto r1 = autoscaler::apply(state, {{ScaleAction::Kind::CreateNode, ""}}, bind);
  state.clock().advance_to(r1.retries[0].at);
  cloud.script_create(ProviderErrorKind::Transient);
  auto r2 = autoscaler::continue_attempt(state, r1.retries[0], bind);
  state.clock().advance_to(r2.retry->at);
  cloud.script_create(ProviderErrorKind::Transient);
  auto r3 = autoscaler::continue_attempt(state, *r2.retry, bind);

  REQUIRE(r3.outcome.status == autoscaler::ApplyStatus::Failed);
  REQUIRE_FALSE(r3.retry.has_value());
  REQUIRE(state.node("n00001").state == NodeState::Failed);
  REQUIRE(state.log().empty());  // never provisioned, never billed

  // cleanup: no instance to delete, record goes straight to Terminated
  auto plan = autoscaler::reconcile(state, state.now());
  REQUIRE(plan.size() == 1);
  auto r4 = autoscaler::apply(state, plan, bind);
  REQUIRE(r4.outcomes[0].status == autoscaler::ApplyStatus::Succeeded);
  REQUIRE(state.node("n00001").state == NodeState::Terminated);
  REQUIRE(cloud.calls.size() == 3);  // three creates, zero deletes
  REQUIRE(state.log().empty());
}

TEST_CASE("terminations drain, delete, and survive delete failures", "[autoscaler]") {
  ClusterState state(testing::test_cluster_config());
  testing::ScriptedProvider cloud;
  auto bind = bind_to(cloud);
  std::string id = add_idle_node(state);
  state.clock().advance_to(400'000);

  SECTION("clean delete") {
    cloud.script_delete(ProviderErrorKind::None);
    auto result = autoscaler::apply(state, {{ScaleAction::Kind::TerminateNode, id}}, bind);
    REQUIRE(result.outcomes[0].status == autoscaler::ApplyStatus::Succeeded);
    REQUIRE(state.node(id).state == NodeState::Terminated);
    REQUIRE(state.node(id).terminated_at == 400'000);
    REQUIRE(state.log().events().back().kind == EventKind::NodeTerminated);
  }

  SECTION("transient failures retry, then exhaust to Failed, then recover") {
    cloud.script_delete(ProviderErrorKind::Transient);
    auto r1 = autoscaler::apply(state, {{ScaleAction::Kind::TerminateNode, id}}, bind);
    REQUIRE(r1.outcomes[0].status == autoscaler::ApplyStatus::RetryScheduled);
    REQUIRE(state.node(id).state == NodeState::Terminating);

    state.clock().advance_to(r1.retries[0].at);
    cloud.script_delete(ProviderErrorKind::Transient);
    auto r2 = autoscaler::continue_attempt(state, r1.retries[0], bind);
    state.clock().advance_to(r2.retry->at);
    cloud.script_delete(ProviderErrorKind::Transient);
    auto r3 = autoscaler::continue_attempt(state, *r2.retry, bind);
    REQUIRE(r3.outcome.status == autoscaler::ApplyStatus::Failed);
    REQUIRE(state.node(id).state == NodeState::Failed);
    REQUIRE(state.log().events().back().kind == EventKind::NodeFailed);

    // next reconcile pass retries the cleanup with a fresh attempt budget
    auto plan = autoscaler::reconcile(state, state.now());
    REQUIRE(plan == std::vector<ScaleAction>{{ScaleAction::Kind::TerminateNode, id}});
    cloud.script_delete(ProviderErrorKind::None);
    auto r4 = autoscaler::apply(state, plan, bind);
    REQUIRE(r4.outcomes[0].status == autoscaler::ApplyStatus::Succeeded);
    REQUIRE(state.node(id).state == NodeState::Terminated);
    validate_log(state.log().events());
    REQUIRE(leaked_nodes(state.log().events()).empty());
  }

  SECTION("unknown instance means nothing is leaked") {
    cloud.script_delete(ProviderErrorKind::UnknownInstance);
    auto result = autoscaler::apply(state, {{ScaleAction::Kind::TerminateNode, id}}, bind);
    REQUIRE(result.outcomes[0].status == autoscaler::ApplyStatus::Succeeded);
    REQUIRE(state.node(id).state == NodeState::Terminated);
  }
}

TEST_CASE("plans order creates before terminations", "[autoscaler]") {
  ClusterState state(testing::test_cluster_config());
  std::string idle = add_idle_node(state);
  state.clock().advance_to(400'000);
  // one idle node past timeout, plus fresh demand the idle node satisfies
  // only partially: the plan must create and may reclaim nothing
  scheduler::submit(state, make_job("j", 2, 400'000));
  auto plan = autoscaler::reconcile(state, state.now());
  REQUIRE(count_kind(plan, ScaleAction::Kind::CreateNode) == 1);
  REQUIRE(count_kind(plan, ScaleAction::Kind::TerminateNode) == 0);

  // with no demand, a failed and a timed-out idle node are both terminated,
  // after any creates, in node id order
  ClusterState st2(testing::test_cluster_config());
  std::string i1 = add_idle_node(st2);
  std::string i2 = add_idle_node(st2);
  st2.transition_node(i2, NodeState::Failed, {{"reason", "Transient"}});
  st2.clock().advance_to(400'000);
  auto plan2 = autoscaler::reconcile(st2, st2.now());
  REQUIRE(plan2.size() == 2);
  REQUIRE(plan2[0].node_id == i1);
  REQUIRE(plan2[1].node_id == i2);
}
