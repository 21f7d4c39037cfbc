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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vcluster/core/error.hpp"
#include "vcluster/core/events.hpp"
#include "vcluster/core/time.hpp"

namespace vcluster {

struct MalformedLog : Error {
  using Error::Error;
};

/// Accounting derived purely from the event log. A node is billed from
/// NodeRequested to NodeTerminated; a node the provider never delivered has
/// no NodeRequested event and costs nothing. Busy time is the union of its
/// Allocated intervals. Intervals still open when the log ends are closed
/// at the last event's timestamp.
struct UsageReport {
  double node_seconds_total = 0.0;
  double node_seconds_busy = 0.0;
  int max_concurrent_nodes = 0;
  std::map<std::string, DurationMs> per_job_wait_ms;

  double utilization() const {
    return node_seconds_total > 0.0 ? node_seconds_busy / node_seconds_total : 0.0;
  }

  double mean_wait_ms() const {
    if (per_job_wait_ms.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [id, w] : per_job_wait_ms) sum += static_cast<double>(w);
    return sum / static_cast<double>(per_job_wait_ms.size());
  }
};

namespace detail {

struct NodeTrack {
  TimeMs requested_at = 0;
  std::optional<TimeMs> allocated_since;
  bool active = false;
  bool counted_live = true;  // still inside the max_concurrent sweep
  bool terminated = false;
  double busy_ms = 0.0;
};

inline const std::string& payload_field(const Event& e, const char* key) {
  auto it = e.payload.find(key);
  if (it == e.payload.end()) {
    throw MalformedLog("event seq " + std::to_string(e.seq) + " missing payload key '" + key +
                       "'");
  }
  return it->second;
}

}  // namespace detail

/// Structural checks: seq is 1,2,3,..., time never decreases, and each
/// node's and job's milestones arrive in lifecycle order. Throws
/// MalformedLog with the offending seq number.
inline void validate_log(const std::vector<Event>& events) {
  auto bad = [](const Event& e, const std::string& why) {
    throw MalformedLog("event seq " + std::to_string(e.seq) + ": " + why);
  };
  std::uint64_t expect_seq = 1;
  TimeMs last_time = 0;
  std::map<std::string, detail::NodeTrack> node_tracks;
  std::set<std::string> submitted, started, ended;

  for (const Event& e : events) {
    if (e.seq != expect_seq) bad(e, "sequence number is not contiguous from 1");
    ++expect_seq;
    if (e.seq > 1 && e.time < last_time) bad(e, "timestamp decreased");
    last_time = e.time;

    switch (e.kind) {
      case EventKind::NodeRequested: {
        const std::string& id = detail::payload_field(e, "node");
        if (node_tracks.count(id)) bad(e, "node " + id + " requested twice");
        node_tracks[id].requested_at = e.time;
        break;
      }
      case EventKind::NodeActive:
      case EventKind::NodeAllocated:
      case EventKind::NodeIdle:
      case EventKind::NodeTerminated:
      case EventKind::NodeFailed: {
        const std::string& id = detail::payload_field(e, "node");
        auto it = node_tracks.find(id);
        if (it == node_tracks.end()) bad(e, "node " + id + " was never requested");
        detail::NodeTrack& t = it->second;
        if (t.terminated) bad(e, "node " + id + " already terminated");
        if (e.kind == EventKind::NodeActive) {
          if (t.active) bad(e, "node " + id + " activated twice");
          t.active = true;
        } else if (e.kind == EventKind::NodeAllocated) {
          if (!t.active) bad(e, "node " + id + " allocated before active");
          if (t.allocated_since) bad(e, "node " + id + " allocated while allocated");
          t.allocated_since = e.time;
        } else if (e.kind == EventKind::NodeIdle) {
          if (!t.allocated_since) bad(e, "node " + id + " idled while not allocated");
          t.allocated_since.reset();
        } else if (e.kind == EventKind::NodeTerminated) {
          t.terminated = true;
        }
        break;
      }
      case EventKind::JobSubmitted: {
        const std::string& id = detail::payload_field(e, "job");
        if (!submitted.insert(id).second) bad(e, "job " + id + " submitted twice");
        break;
      }
      case EventKind::JobStarted: {
        const std::string& id = detail::payload_field(e, "job");
        if (!submitted.count(id)) bad(e, "job " + id + " started before submission");
        if (!started.insert(id).second) bad(e, "job " + id + " started twice");
        break;
      }
      case EventKind::JobEnded: {
        const std::string& id = detail::payload_field(e, "job");
        if (!started.count(id)) bad(e, "job " + id + " ended before starting");
        if (!ended.insert(id).second) bad(e, "job " + id + " ended twice");
        break;
      }
      case EventKind::ReconcileRan:
        break;
    }
  }
}

inline UsageReport accumulate_usage(const std::vector<Event>& events) {
  validate_log(events);
  UsageReport report;
  if (events.empty()) return report;
  const TimeMs log_end = events.back().time;

  std::map<std::string, detail::NodeTrack> tracks;
  std::map<std::string, TimeMs> submit_times;
  std::map<std::string, TimeMs> node_end;  // billing end (NodeTerminated), else log_end
  int live = 0;

  for (const Event& e : events) {
    switch (e.kind) {
      case EventKind::NodeRequested: {
        detail::NodeTrack& t = tracks[e.payload.at("node")];
        t.requested_at = e.time;
        ++live;
        report.max_concurrent_nodes = std::max(report.max_concurrent_nodes, live);
        break;
      }
      case EventKind::NodeAllocated:
        tracks.at(e.payload.at("node")).allocated_since = e.time;
        break;
      case EventKind::NodeIdle: {
        detail::NodeTrack& t = tracks.at(e.payload.at("node"));
        t.busy_ms += static_cast<double>(e.time - *t.allocated_since);
        t.allocated_since.reset();
        break;
      }
      case EventKind::NodeTerminated:
      case EventKind::NodeFailed: {
        detail::NodeTrack& t = tracks.at(e.payload.at("node"));
        if (t.counted_live) {
          t.counted_live = false;
          --live;
        }
        if (t.allocated_since) {  // died while running a job
          t.busy_ms += static_cast<double>(e.time - *t.allocated_since);
          t.allocated_since.reset();
        }
        if (e.kind == EventKind::NodeTerminated) {
          node_end[e.payload.at("node")] = e.time;
          t.terminated = true;
        }
        break;
      }
      case EventKind::JobSubmitted:
        submit_times[e.payload.at("job")] = e.time;
        break;
      case EventKind::JobStarted: {
        const std::string& id = e.payload.at("job");
        report.per_job_wait_ms[id] = e.time - submit_times.at(id);
        break;
      }
      case EventKind::JobEnded:
      case EventKind::NodeActive:
      case EventKind::ReconcileRan:
        break;
    }
  }

  for (auto& [id, t] : tracks) {
    if (t.allocated_since) t.busy_ms += static_cast<double>(log_end - *t.allocated_since);
    TimeMs end = t.terminated ? node_end.at(id) : log_end;
    report.node_seconds_total += static_cast<double>(end - t.requested_at) / 1000.0;
    report.node_seconds_busy += t.busy_ms / 1000.0;
  }
  return report;
}

/// Nodes the provider delivered that were never terminated. A clean
/// shutdown leaves this empty; anything here is a leaked (still billed)
/// instance.
inline std::vector<std::string> leaked_nodes(const std::vector<Event>& events) {
  std::set<std::string> requested, terminated;
  for (const Event& e : events) {
    if (e.kind == EventKind::NodeRequested) requested.insert(e.payload.at("node"));
    if (e.kind == EventKind::NodeTerminated) terminated.insert(e.payload.at("node"));
  }
  std::vector<std::string> out;
  for (const std::string& id : requested) {
    if (!terminated.count(id)) out.push_back(id);
  }
  return out;
}

}  // namespace vcluster
