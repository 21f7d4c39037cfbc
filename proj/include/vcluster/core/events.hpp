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

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vcluster/core/error.hpp"
#include "vcluster/core/time.hpp"

namespace vcluster {

// The event log is the single source of truth for usage accounting, so the
// kind set is closed: replay code exhaustively handles every value.
enum class EventKind {
  JobSubmitted,
  JobStarted,
  JobEnded,
  NodeRequested,   // provider accepted the create call
  NodeActive,      // instance finished booting, node became schedulable
  NodeAllocated,
  NodeIdle,        // released by a job back to the pool
  NodeTerminated,
  NodeFailed,
  ReconcileRan
};

inline std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::JobSubmitted: return "JobSubmitted";
    case EventKind::JobStarted: return "JobStarted";
    case EventKind::JobEnded: return "JobEnded";
    case EventKind::NodeRequested: return "NodeRequested";
    case EventKind::NodeActive: return "NodeActive";
    case EventKind::NodeAllocated: return "NodeAllocated";
    case EventKind::NodeIdle: return "NodeIdle";
    case EventKind::NodeTerminated: return "NodeTerminated";
    case EventKind::NodeFailed: return "NodeFailed";
    case EventKind::ReconcileRan: return "ReconcileRan";
  }
  return "?";
}

inline EventKind event_kind_from_string(std::string_view s) {
  if (s == "JobSubmitted") return EventKind::JobSubmitted;
  if (s == "JobStarted") return EventKind::JobStarted;
  if (s == "JobEnded") return EventKind::JobEnded;
  if (s == "NodeRequested") return EventKind::NodeRequested;
  if (s == "NodeActive") return EventKind::NodeActive;
  if (s == "NodeAllocated") return EventKind::NodeAllocated;
  if (s == "NodeIdle") return EventKind::NodeIdle;
  if (s == "NodeTerminated") return EventKind::NodeTerminated;
  if (s == "NodeFailed") return EventKind::NodeFailed;
  if (s == "ReconcileRan") return EventKind::ReconcileRan;
  throw Error("unknown event kind: " + std::string(s));
}

/// One log record. `payload` is a sorted key/value map so rendering is
/// byte-stable across runs; keys and values must not contain whitespace,
/// '=', tabs, or newlines.
struct Event {
  std::uint64_t seq = 0;
  TimeMs time = 0;
  EventKind kind = EventKind::ReconcileRan;
  std::map<std::string, std::string> payload;

  bool operator==(const Event&) const = default;
};

namespace detail {
inline void check_payload_token(const std::string& s, const char* what) {
  if (s.empty()) throw Error(std::string("event payload ") + what + " must not be empty");
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '=') {
      throw Error(std::string("event payload ") + what + " contains forbidden character: " + s);
    }
  }
}
}  // namespace detail

/// `seq\ttime\tkind\tk=v k=v\n` with keys in sorted order. The trailing
/// field is empty (not omitted) when the payload is empty, so the line
/// always has exactly four tab-separated columns.
inline std::string render_event_line(const Event& e) {
  std::ostringstream out;
  out << e.seq << '\t' << e.time << '\t' << to_string(e.kind) << '\t';
  bool first = true;
  for (const auto& [k, v] : e.payload) {
    detail::check_payload_token(k, "key");
    detail::check_payload_token(v, "value");
    if (!first) out << ' ';
    out << k << '=' << v;
    first = false;
  }
  out << '\n';
  return out.str();
}

inline Event parse_event_line(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '\t') {
      cols.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  if (cols.size() != 4) throw Error("event line must have 4 tab-separated columns");
  Event e;
  try {
    e.seq = std::stoull(std::string(cols[0]));
    e.time = std::stoll(std::string(cols[1]));
  } catch (const std::exception&) {
    throw Error("event line has a malformed seq or time column");
  }
  e.kind = event_kind_from_string(cols[2]);
  std::string_view rest = cols[3];
  while (!rest.empty()) {
    auto sp = rest.find(' ');
    std::string_view tok = rest.substr(0, sp);
    rest = (sp == std::string_view::npos) ? std::string_view{} : rest.substr(sp + 1);
    auto eq = tok.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 >= tok.size()) {
      throw Error("malformed payload token: " + std::string(tok));
    }
    e.payload.emplace(std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1)));
  }
  return e;
}

/// Append-only log. Enforces the two log invariants at write time:
/// seq starts at 1 and increments by 1, time never decreases.
class EventLog {
 public:
  const Event& append(TimeMs time, EventKind kind, std::map<std::string, std::string> payload) {
    if (!events_.empty() && time < events_.back().time) {
      throw Error("event log time went backwards");
    }
    Event e;
    e.seq = events_.size() + 1;
    e.time = time;
    e.kind = kind;
    e.payload = std::move(payload);
    events_.push_back(std::move(e));
    return events_.back();
  }

  const std::vector<Event>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }

  std::string render() const {
    std::string out;
    for (const Event& e : events_) out += render_event_line(e);
    return out;
  }

 private:
  std::vector<Event> events_;
};

inline std::vector<Event> parse_event_log(std::string_view text) {
  std::vector<Event> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line =
        (nl == std::string_view::npos) ? text.substr(pos) : text.substr(pos, nl - pos);
    if (!line.empty()) out.push_back(parse_event_line(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

}  // namespace vcluster
