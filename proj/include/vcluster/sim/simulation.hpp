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

#include <cstdio>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "vcluster/autoscaler/autoscaler.hpp"
#include "vcluster/core/cluster.hpp"
#include "vcluster/core/usage.hpp"
#include "vcluster/provider/example_profiles.hpp"
#include "vcluster/provider/sim_provider.hpp"
#include "vcluster/scheduler/scheduler.hpp"
#include "vcluster/sim/trace.hpp"
#include "vcluster/store/mpi.hpp"

namespace vcluster::sim {

struct SimulationInputs {
  ClusterConfig cluster;
  provider::SimProviderConfig provider;
  autoscaler::RetryPolicy retry;
  provider::CloudProfile profile = provider::jetstream_like_profile();
  WorkloadTrace trace;
  std::string cluster_id = "vc0";
  TimeMs max_virtual_time = 30LL * 86'400'000;  // livelock guard
};

struct JobOutcome {
  JobState state = JobState::Pending;
  TimeMs submit = 0;
  std::optional<TimeMs> start;
  std::optional<TimeMs> end;
};

struct ScalePoint {
  TimeMs time = 0;
  int demand = 0;
  int live = 0;  // after the reconcile pass applied its plan
};

struct SimulationReport {
  UsageReport usage;
  std::map<std::string, JobOutcome> jobs;
  std::vector<ScalePoint> scaling;
  bool leak_check_ok = false;
  std::string event_log_text;
  TimeMs end_time = 0;
};

/// Deterministic discrete-event driver around the cluster, scheduler,
/// autoscaler, and simulated provider. Same inputs, same seed: the event
/// log comes out byte-identical.
///
/// Heap ordering at equal timestamps is fixed by kind: submissions land
/// first, then boot activations, then job completions, then provider
/// retries, and the reconcile pass runs last so it always sees that
/// millisecond's settled state. Insertion order breaks remaining ties.
class SimulationEngine {
 public:
  explicit SimulationEngine(SimulationInputs in)
      : in_(std::move(in)), state_(in_.cluster), provider_(in_.provider) {
    in_.retry.validate();
    in_.profile.validate();
    ingest_trace();
    push(0, kPrioReconcile, Item{Item::Reconcile, "", {}, 0});
  }

  SimulationReport run() {
    if (ran_) throw Error("simulation already ran");
    ran_ = true;
    while (!heap_.empty()) {
      Item item = pop();
      if (item.time > in_.max_virtual_time) {
        throw Error("simulation exceeded max_virtual_time without finishing");
      }
      state_.clock().advance_to(item.time);
      switch (item.what) {
        case Item::Submit: on_submit(item); break;
        case Item::Activation: on_activation(item); break;
        case Item::Completion: on_completion(item); break;
        case Item::Retry: on_retry(item); break;
        case Item::Reconcile:
          on_reconcile();
          if (finished()) return make_report();
          push(state_.now() + state_.config().reconcile_interval, kPrioReconcile,
               Item{Item::Reconcile, "", {}, 0});
          break;
      }
    }
    throw Error("simulation ran out of events before finishing");
  }

  const ClusterState& state() const { return state_; }
  const provider::SimProvider& cloud() const { return provider_; }

 private:
  static constexpr int kPrioSubmit = 0;
  static constexpr int kPrioActivation = 1;
  static constexpr int kPrioCompletion = 2;
  static constexpr int kPrioRetry = 3;
  static constexpr int kPrioReconcile = 4;

  struct Item {
    enum What { Submit, Activation, Completion, Retry, Reconcile };
    What what = Reconcile;
    std::string id;  // job or node id
    autoscaler::PendingAttempt attempt;
    std::size_t trace_index = 0;
    TimeMs time = 0;
    int prio = 0;
    std::uint64_t tie = 0;
  };

  struct ItemAfter {
    bool operator()(const Item& a, const Item& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.prio != b.prio) return a.prio > b.prio;
      return a.tie > b.tie;
    }
  };

  void push(TimeMs time, int prio, Item item) {
    item.time = time;
    item.prio = prio;
    item.tie = ++tie_;
    heap_.push(std::move(item));
  }

  Item pop() {
    Item item = heap_.top();
    heap_.pop();
    return item;
  }

  /// Builds every job spec upfront and rejects the whole trace if any entry
  /// can never run here: too wide for the pool, or container MPI that the
  /// host MPI cannot launch.
  void ingest_trace() {
    const ClusterConfig& cfg = state_.config();
    std::size_t idx = 0;
    for (const TraceEntry& e : in_.trace.entries) {
      e.validate();
      char buf[16];
      std::snprintf(buf, sizeof(buf), "j%05zu", idx + 1);
      if (e.node_count > cfg.max_nodes) {
        throw JobTooLarge(buf, e.node_count, cfg.max_nodes);
      }
      auto compat = store::check_mpi_compat(cfg.host_mpi, e.mpi);
      if (!compat.compatible) {
        throw store::IncompatibleMpi("job " + std::string(buf) + ": " + compat.reason);
      }
      JobSpec spec;
      spec.job_id = buf;
      spec.node_count = e.node_count;
      spec.tasks_per_node = e.tasks_per_node;
      spec.walltime_limit = e.walltime_ms;
      spec.image = e.image;
      spec.command = "run";
      spec.submit_time = e.submit_ms;
      specs_.push_back(std::move(spec));
      durations_.push_back(e.duration_ms);
      push(e.submit_ms, kPrioSubmit, Item{Item::Submit, "", {}, idx});
      ++idx;
    }
  }

  void on_submit(const Item& item) {
    scheduler::submit(state_, specs_[item.trace_index]);
    ++submitted_;
    dispatch();
  }

  void on_activation(const Item& item) {
    state_.transition_node(item.id, NodeState::Idle);
    dispatch();
  }

  void on_completion(const Item& item) {
    const JobRecord& j = state_.job(item.id);
    DurationMs duration = durations_[job_index(item.id)];
    JobState final_state =
        duration <= j.spec.walltime_limit ? JobState::Completed : JobState::TimedOut;
    scheduler::finish(state_, item.id, final_state);
    dispatch();
  }

  void on_retry(const Item& item) {
    handle_attempt(autoscaler::continue_attempt(state_, item.attempt, binding()));
  }

  void on_reconcile() {
    const bool shutdown = submitted_ == specs_.size() && all_jobs_terminal();
    std::optional<int> floor = shutdown ? std::optional<int>(0) : std::nullopt;
    auto plan = autoscaler::reconcile(state_, state_.now(), floor);

    int creates = 0;
    for (const auto& a : plan) creates += a.kind == autoscaler::ScaleAction::Kind::CreateNode;
    const int demand = scheduler::demand(state_);
    state_.emit_reconcile({{"creates", std::to_string(creates)},
                           {"demand", std::to_string(demand)},
                           {"live", std::to_string(state_.live_node_count())},
                           {"terms", std::to_string(plan.size() - creates)}});

    auto bind = binding();
    autoscaler::ApplyResult result = autoscaler::apply(state_, plan, bind);
    for (const autoscaler::ApplyOutcome& out : result.outcomes) {
      if (out.op == autoscaler::OpKind::Create &&
          out.status == autoscaler::ApplyStatus::Succeeded) {
        push(out.active_at, kPrioActivation, Item{Item::Activation, out.node_id, {}, 0});
      }
    }
    for (const autoscaler::PendingAttempt& retry : result.retries) {
      push(retry.at, kPrioRetry, Item{Item::Retry, retry.node_id, retry, 0});
    }
    scaling_.push_back(ScalePoint{state_.now(), demand, state_.live_node_count()});
  }

  void handle_attempt(const autoscaler::AttemptResult& res) {
    if (res.outcome.op == autoscaler::OpKind::Create &&
        res.outcome.status == autoscaler::ApplyStatus::Succeeded) {
      push(res.outcome.active_at, kPrioActivation,
           Item{Item::Activation, res.outcome.node_id, {}, 0});
    }
    if (res.retry) {
      push(res.retry->at, kPrioRetry, Item{Item::Retry, res.retry->node_id, *res.retry, 0});
    }
  }

  /// Starts every job the scheduler can, then books their completions.
  void dispatch() {
    for (const scheduler::Assignment& a : scheduler::try_schedule(state_)) {
      const JobRecord& j = state_.job(a.job_id);
      DurationMs runtime = std::min(durations_[job_index(a.job_id)], j.spec.walltime_limit);
      push(state_.now() + runtime, kPrioCompletion, Item{Item::Completion, a.job_id, {}, 0});
    }
  }

  std::size_t job_index(const std::string& job_id) const {
    return static_cast<std::size_t>(std::stoul(job_id.substr(1))) - 1;
  }

  autoscaler::ProviderBinding binding() {
    return autoscaler::ProviderBinding{provider_, in_.profile, in_.retry, in_.cluster_id};
  }

  bool all_jobs_terminal() const {
    for (const auto& [id, j] : state_.jobs()) {
      if (!is_terminal(j.state)) return false;
    }
    return state_.jobs().size() == submitted_;
  }

  bool finished() const {
    if (submitted_ != specs_.size() || !all_jobs_terminal()) return false;
    for (const auto& [id, n] : state_.nodes()) {
      if (n.state != NodeState::Terminated) return false;
    }
    return true;
  }

  SimulationReport make_report() {
    SimulationReport rep;
    rep.usage = accumulate_usage(state_.log().events());
    for (const auto& [id, j] : state_.jobs()) {
      rep.jobs[id] = JobOutcome{j.state, j.spec.submit_time, j.start_time, j.end_time};
    }
    rep.scaling = scaling_;
    rep.leak_check_ok = leaked_nodes(state_.log().events()).empty() && provider_.live_count() == 0;
    rep.event_log_text = state_.log().render();
    rep.end_time = state_.now();
    return rep;
  }

  SimulationInputs in_;
  ClusterState state_;
  provider::SimProvider provider_;
  std::vector<JobSpec> specs_;
  std::vector<DurationMs> durations_;
  std::priority_queue<Item, std::vector<Item>, ItemAfter> heap_;
  std::vector<ScalePoint> scaling_;
  std::size_t submitted_ = 0;
  std::uint64_t tie_ = 0;
  bool ran_ = false;
};

inline SimulationReport run_simulation(SimulationInputs in) {
  SimulationEngine engine(std::move(in));
  return engine.run();
}

}  // namespace vcluster::sim
