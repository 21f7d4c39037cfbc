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

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "vcluster/core/cluster.hpp"
#include "vcluster/core/events.hpp"
#include "vcluster/core/time.hpp"
#include "vcluster/core/types.hpp"
#include "vcluster/core/usage.hpp"
#include "vcluster/store/image.hpp"

using namespace vcluster;

namespace {

JobSpec make_job(const std::string& id, int nodes, TimeMs submit = 0) {
  JobSpec spec;
  spec.job_id = id;
  spec.node_count = nodes;
  spec.tasks_per_node = 4;
  spec.walltime_limit = 900'000;
  spec.image = store::ImageRef::parse("hub/app:latest");
  spec.submit_time = submit;
  return spec;
}

}  // namespace

TEST_CASE("virtual clock only moves forward", "[core]") {
  VirtualClock clock;
  REQUIRE(clock.now() == 0);
  clock.advance_to(50);
  clock.advance_to(50);
  REQUIRE(clock.now() == 50);
  REQUIRE_THROWS_AS(clock.advance_to(49), Error);
}

TEST_CASE("config and job validation reject nonsense", "[core]") {
  ClusterConfig cfg = testing::test_cluster_config();
  REQUIRE_NOTHROW(cfg.validate());
  SECTION("min above max") {
    cfg.min_nodes = 11;
    REQUIRE_THROWS_AS(cfg.validate(), Error);
  }
  SECTION("zero reconcile interval") {
    cfg.reconcile_interval = 0;
    REQUIRE_THROWS_AS(cfg.validate(), Error);
  }
  SECTION("negative storage") {
    cfg.storage.work_gb = -1;
    REQUIRE_THROWS_AS(cfg.validate(), Error);
  }
  SECTION("job needs positive walltime") {
    JobSpec j = make_job("j1", 2);
    j.walltime_limit = 0;
    REQUIRE_THROWS_AS(j.validate(), Error);
  }
}

TEST_CASE("node transition legality matches the declared edge set", "[core]") {
  using S = NodeState;
  const std::set<std::pair<S, S>> legal = {
      {S::Requested, S::Provisioning}, {S::Provisioning, S::Idle}, {S::Idle, S::Allocated},
      {S::Allocated, S::Idle},         {S::Idle, S::Draining},     {S::Draining, S::Terminating},
      {S::Terminating, S::Terminated}, {S::Failed, S::Terminating},
      // every non-terminal state may fail
      {S::Requested, S::Failed},       {S::Provisioning, S::Failed}, {S::Idle, S::Failed},
      {S::Allocated, S::Failed},       {S::Draining, S::Failed},     {S::Terminating, S::Failed},
  };
  const S all[] = {S::Requested, S::Provisioning, S::Idle,       S::Allocated,
                   S::Draining,  S::Terminating,  S::Terminated, S::Failed};
  for (S from : all) {
    for (S to : all) {
      CAPTURE(to_string(from), to_string(to));
      REQUIRE(is_node_transition_legal(from, to) == (legal.count({from, to}) != 0));
    }
  }
}

TEST_CASE("event lines render byte-stably and round trip", "[core]") {
  Event e;
  e.seq = 7;
  e.time = 123'456;
  e.kind = EventKind::JobStarted;
  e.payload = {{"wait", "3000"}, {"job", "j00002"}};
  // keys come out sorted regardless of insertion order
  REQUIRE(render_event_line(e) == "7\t123456\tJobStarted\tjob=j00002 wait=3000\n");
  REQUIRE(parse_event_line(render_event_line(e)) == e);

  Event bare;
  bare.seq = 1;
  bare.kind = EventKind::ReconcileRan;
  REQUIRE(render_event_line(bare) == "1\t0\tReconcileRan\t\n");
  REQUIRE(parse_event_line("1\t0\tReconcileRan\t") == bare);
}

TEST_CASE("event payload tokens may not contain separators", "[core]") {
  Event e;
  e.seq = 1;
  e.kind = EventKind::NodeIdle;
  SECTION("space in value") {
    e.payload = {{"node", "a b"}};
    REQUIRE_THROWS_AS(render_event_line(e), Error);
  }
  SECTION("equals in key") {
    e.payload = {{"no=de", "x"}};
    REQUIRE_THROWS_AS(render_event_line(e), Error);
  }
}

TEST_CASE("event line parser rejects malformed input", "[core]") {
  REQUIRE_THROWS_AS(parse_event_line("1\t0\tReconcileRan"), Error);          // 3 columns
  REQUIRE_THROWS_AS(parse_event_line("1\t0\tNoSuchKind\t"), Error);          // bad kind
  REQUIRE_THROWS_AS(parse_event_line("x\t0\tReconcileRan\t"), Error);        // bad seq
  REQUIRE_THROWS_AS(parse_event_line("1\t0\tNodeIdle\tnode"), Error);        // no '='
  REQUIRE_THROWS_AS(parse_event_line("1\t0\tNodeIdle\tnode="), Error);       // empty value
}

TEST_CASE("event log enforces seq and time invariants", "[core]") {
  EventLog log;
  log.append(10, EventKind::ReconcileRan, {});
  log.append(10, EventKind::ReconcileRan, {});
  log.append(25, EventKind::ReconcileRan, {});
  REQUIRE(log.events()[0].seq == 1);
  REQUIRE(log.events()[1].seq == 2);
  REQUIRE(log.events()[2].seq == 3);
  REQUIRE_THROWS_AS(log.append(24, EventKind::ReconcileRan, {}), Error);

  auto parsed = parse_event_log(log.render());
  REQUIRE(parsed == log.events());
}

TEST_CASE("cluster state assigns node ids and marks milestones", "[core]") {
  ClusterState state(testing::test_cluster_config());
  NodeRecord& a = state.add_node();
  NodeRecord& b = state.add_node();
  REQUIRE(a.node_id == "n00001");
  REQUIRE(b.node_id == "n00002");
  REQUIRE(state.log().empty());  // records alone are not billable

  state.clock().advance_to(100);
  state.node("n00001").instance_id = "i-1";
  state.transition_node("n00001", NodeState::Provisioning, {{"attempts", "1"}});
  REQUIRE(state.log().size() == 1);
  REQUIRE(state.log().events()[0].kind == EventKind::NodeRequested);
  REQUIRE(state.log().events()[0].payload.at("node") == "n00001");
  REQUIRE(state.log().events()[0].payload.at("instance") == "i-1");

  state.clock().advance_to(30'100);
  state.transition_node("n00001", NodeState::Idle);
  REQUIRE(state.log().events()[1].kind == EventKind::NodeActive);
  REQUIRE(state.node("n00001").idle_since == 30'100);

  state.transition_node("n00001", NodeState::Allocated, {{"job", "j1"}});
  REQUIRE(state.log().events()[2].kind == EventKind::NodeAllocated);
  REQUIRE_FALSE(state.node("n00001").idle_since.has_value());

  state.transition_node("n00001", NodeState::Idle);
  REQUIRE(state.log().events()[3].kind == EventKind::NodeIdle);

  REQUIRE_THROWS_AS(state.transition_node("n00001", NodeState::Terminating), IllegalTransition);
  REQUIRE(state.live_node_count() == 2);
}

TEST_CASE("nodes without an instance pass through states silently", "[core]") {
  ClusterState state(testing::test_cluster_config());
  state.add_node();
  state.transition_node("n00001", NodeState::Failed, {{"reason", "Transient"}});
  state.transition_node("n00001", NodeState::Terminating);
  state.transition_node("n00001", NodeState::Terminated);
  REQUIRE(state.log().empty());
  REQUIRE(state.node("n00001").state == NodeState::Terminated);
  REQUIRE(state.live_node_count() == 0);
}

TEST_CASE("pending queue orders by submit time then job id", "[core]") {
  ClusterState state(testing::test_cluster_config());
  state.clock().advance_to(500);
  state.add_job(make_job("j-c", 1, 500));
  state.add_job(make_job("j-a", 1, 500));
  state.add_job(make_job("j-late", 1, 700));
  state.add_job(make_job("j-early", 1, 100));
  REQUIRE(state.queue().pending ==
          std::vector<std::string>{"j-early", "j-a", "j-c", "j-late"});
  REQUIRE_THROWS_AS(state.add_job(make_job("j-a", 1, 500)), Error);  // duplicate id
}

TEST_CASE("unpinned images are flagged at submission", "[core]") {
  ClusterState state(testing::test_cluster_config());
  state.add_job(make_job("mutable", 1));
  JobSpec pinned = make_job("pinned", 1);
  pinned.image = store::ImageRef::parse(
      "hub/app:v1@8f434346648f6b96df89dda901c5176b10a6d83961dd3c1ac88b59b2dc327aa4");
  state.add_job(pinned);

  const auto& events = state.log().events();
  REQUIRE(events[0].payload.count("unpinned") == 1);
  REQUIRE(events[1].payload.count("unpinned") == 0);
}

TEST_CASE("job lifecycle bookkeeping guards its preconditions", "[core]") {
  ClusterState state(testing::test_cluster_config());
  state.add_job(make_job("j1", 2));
  REQUIRE_THROWS_AS(state.mark_job_running("j1", {"n00001"}), Error);  // wrong width
  REQUIRE_THROWS_AS(state.mark_job_ended("j1", JobState::Completed), Error);  // not running

  state.clock().advance_to(40'000);
  state.mark_job_running("j1", {"n00001", "n00002"});
  REQUIRE(state.job("j1").state == JobState::Running);
  REQUIRE(state.queue().pending.empty());
  REQUIRE(state.queue().running.count("j1") == 1);
  REQUIRE(state.log().events().back().payload.at("wait") == "40000");

  REQUIRE_THROWS_AS(state.mark_job_ended("j1", JobState::Running), Error);  // not terminal
  state.mark_job_ended("j1", JobState::Completed);
  REQUIRE(state.job("j1").end_time == 40'000);
  REQUIRE(state.queue().running.empty());
}

TEST_CASE("usage accounting on a hand-computed scenario", "[core]") {
  ClusterState state(testing::test_cluster_config());
  NodeRecord& n = state.add_node();
  n.instance_id = "i-1";
  state.transition_node(n.node_id, NodeState::Provisioning);
  state.clock().advance_to(5'000);
  state.add_job(make_job("j1", 1, 5'000));
  state.clock().advance_to(30'000);
  state.transition_node(n.node_id, NodeState::Idle);
  state.clock().advance_to(40'000);
  state.mark_job_running("j1", {n.node_id});
  state.transition_node(n.node_id, NodeState::Allocated, {{"job", "j1"}});
  state.clock().advance_to(100'000);
  state.mark_job_ended("j1", JobState::Completed);
  state.transition_node(n.node_id, NodeState::Idle, {{"job", "j1"}});
  state.clock().advance_to(200'000);
  state.transition_node(n.node_id, NodeState::Draining);
  state.transition_node(n.node_id, NodeState::Terminating);
  state.transition_node(n.node_id, NodeState::Terminated);

  UsageReport usage = accumulate_usage(state.log().events());
  REQUIRE(usage.node_seconds_total == Catch::Approx(200.0));
  REQUIRE(usage.node_seconds_busy == Catch::Approx(60.0));
  REQUIRE(usage.utilization() == Catch::Approx(0.3));
  REQUIRE(usage.max_concurrent_nodes == 1);
  REQUIRE(usage.per_job_wait_ms.at("j1") == 35'000);
  REQUIRE(leaked_nodes(state.log().events()).empty());
}

namespace {

struct GeneratedNode {
  TimeMs req = 0;
  TimeMs term = 0;
  std::vector<std::pair<TimeMs, TimeMs>> busy;  // disjoint, inside [req, term]
};

// Builds a random but structurally valid interval layout, then the exact
// event log it implies. Expected figures come from the layout itself, so
// the accounting code is checked against an independent construction.
struct GeneratedLog {
  std::vector<Event> events;
  double expect_total = 0.0;
  double expect_busy = 0.0;
  int expect_max = 0;
};

GeneratedLog generate_case(std::mt19937_64& rng) {
  auto pick = [&](long lo, long hi) {
    return static_cast<TimeMs>(lo + static_cast<long>(rng() % static_cast<unsigned long>(
                                        hi - lo + 1)));
  };
  const int node_count = static_cast<int>(1 + rng() % 6);
  std::vector<GeneratedNode> nodes;
  for (int i = 0; i < node_count; ++i) {
    GeneratedNode n;
    n.req = pick(0, 500) * 100;
    TimeMs cursor = n.req + pick(1, 50) * 100;  // boot
    const int cycles = static_cast<int>(rng() % 3);
    for (int c = 0; c < cycles; ++c) {
      TimeMs start = cursor + pick(1, 20) * 100;
      TimeMs stop = start + pick(1, 40) * 100;
      n.busy.emplace_back(start, stop);
      cursor = stop;
    }
    n.term = cursor + pick(1, 30) * 100;
    nodes.push_back(n);
  }

  struct Raw {
    TimeMs time;
    int node;
    EventKind kind;
  };
  std::vector<Raw> raw;
  for (int i = 0; i < node_count; ++i) {
    const GeneratedNode& n = nodes[i];
    raw.push_back({n.req, i, EventKind::NodeRequested});
    TimeMs active = n.busy.empty() ? n.req : n.busy.front().first;
    raw.push_back({active, i, EventKind::NodeActive});
    for (auto [a, b] : n.busy) {
      raw.push_back({a, i, EventKind::NodeAllocated});
      raw.push_back({b, i, EventKind::NodeIdle});
    }
    raw.push_back({n.term, i, EventKind::NodeTerminated});
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](const Raw& a, const Raw& b) { return a.time < b.time; });

  GeneratedLog out;
  std::uint64_t seq = 0;
  int live = 0;
  for (const Raw& r : raw) {
    Event e;
    e.seq = ++seq;
    e.time = r.time;
    e.kind = r.kind;
    e.payload = {{"node", "n" + std::to_string(r.node)}};
    out.events.push_back(std::move(e));
    if (r.kind == EventKind::NodeRequested) out.expect_max = std::max(out.expect_max, ++live);
    if (r.kind == EventKind::NodeTerminated) --live;
  }
  for (const GeneratedNode& n : nodes) {
    out.expect_total += static_cast<double>(n.term - n.req) / 1000.0;
    for (auto [a, b] : n.busy) out.expect_busy += static_cast<double>(b - a) / 1000.0;
  }
  return out;
}

}  // namespace

TEST_CASE("usage accounting matches generated interval layouts", "[core]") {
  std::mt19937_64 rng(20260815);
  for (int i = 0; i < 200; ++i) {
    GeneratedLog gen = generate_case(rng);
    CAPTURE(i, gen.events.size());
    UsageReport usage = accumulate_usage(gen.events);
    REQUIRE(usage.node_seconds_total == Catch::Approx(gen.expect_total));
    REQUIRE(usage.node_seconds_busy == Catch::Approx(gen.expect_busy));
    REQUIRE(usage.max_concurrent_nodes == gen.expect_max);
    REQUIRE(leaked_nodes(gen.events).empty());
  }
}

namespace {
Event ev(std::uint64_t seq, TimeMs t, EventKind k, std::map<std::string, std::string> p) {
  Event e;
  e.seq = seq;
  e.time = t;
  e.kind = k;
  e.payload = std::move(p);
  return e;
}
}  // namespace

TEST_CASE("log validation rejects structural corruption", "[core]") {
  SECTION("seq gap") {
    std::vector<Event> bad = {ev(1, 0, EventKind::ReconcileRan, {}),
                              ev(3, 1, EventKind::ReconcileRan, {})};
    REQUIRE_THROWS_AS(validate_log(bad), MalformedLog);
  }
  SECTION("time goes backwards") {
    std::vector<Event> bad = {ev(1, 10, EventKind::ReconcileRan, {}),
                              ev(2, 9, EventKind::ReconcileRan, {})};
    REQUIRE_THROWS_AS(validate_log(bad), MalformedLog);
  }
  SECTION("milestone for a node never requested") {
    std::vector<Event> bad = {ev(1, 0, EventKind::NodeActive, {{"node", "n1"}})};
    REQUIRE_THROWS_AS(validate_log(bad), MalformedLog);
  }
  SECTION("allocation before activation") {
    std::vector<Event> bad = {ev(1, 0, EventKind::NodeRequested, {{"node", "n1"}}),
                              ev(2, 1, EventKind::NodeAllocated, {{"node", "n1"}})};
    REQUIRE_THROWS_AS(validate_log(bad), MalformedLog);
  }
  SECTION("double request") {
    std::vector<Event> bad = {ev(1, 0, EventKind::NodeRequested, {{"node", "n1"}}),
                              ev(2, 1, EventKind::NodeRequested, {{"node", "n1"}})};
    REQUIRE_THROWS_AS(validate_log(bad), MalformedLog);
  }
  SECTION("job ends before it starts") {
    std::vector<Event> bad = {ev(1, 0, EventKind::JobSubmitted, {{"job", "j1"}}),
                              ev(2, 1, EventKind::JobEnded, {{"job", "j1"}})};
    REQUIRE_THROWS_AS(validate_log(bad), MalformedLog);
  }
  SECTION("leak detection reports unterminated nodes") {
    std::vector<Event> log = {ev(1, 0, EventKind::NodeRequested, {{"node", "n1"}}),
                              ev(2, 0, EventKind::NodeRequested, {{"node", "n2"}}),
                              ev(3, 5, EventKind::NodeTerminated, {{"node", "n1"}})};
    REQUIRE(leaked_nodes(log) == std::vector<std::string>{"n2"});
  }
}
