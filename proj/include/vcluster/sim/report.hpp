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

#include <iomanip>
#include <sstream>
#include <string>

#include "vcluster/sim/simulation.hpp"

namespace vcluster::sim {

/// Plain-text run summary for terminals and logs.
inline std::string render_report(const SimulationReport& rep) {
  int completed = 0, failed = 0, timed_out = 0;
  for (const auto& [id, j] : rep.jobs) {
    completed += j.state == JobState::Completed;
    failed += j.state == JobState::Failed;
    timed_out += j.state == JobState::TimedOut;
  }
  std::ostringstream out;
  out << std::fixed;
  out << "jobs: " << rep.jobs.size() << " (" << completed << " completed, " << timed_out
      << " timed out, " << failed << " failed)\n";
  out << std::setprecision(1);
  out << "node seconds: " << rep.usage.node_seconds_total << " total, "
      << rep.usage.node_seconds_busy << " busy\n";
  out << std::setprecision(3);
  out << "utilization: " << rep.usage.utilization() << "\n";
  out << "max concurrent nodes: " << rep.usage.max_concurrent_nodes << "\n";
  out << std::setprecision(1);
  out << "mean wait: " << rep.usage.mean_wait_ms() / 1000.0 << "s\n";
  out << "simulated time: " << static_cast<double>(rep.end_time) / 1000.0 << "s\n";
  out << "instance leak check: " << (rep.leak_check_ok ? "clean" : "LEAKED") << "\n";
  return out.str();
}

inline std::string render_jobs(const SimulationReport& rep) {
  std::ostringstream out;
  out << "job\tstate\tsubmit_ms\tstart_ms\tend_ms\twait_ms\n";
  for (const auto& [id, j] : rep.jobs) {
    out << id << '\t' << to_string(j.state) << '\t' << j.submit << '\t';
    if (j.start) {
      out << *j.start;
    } else {
      out << '-';
    }
    out << '\t';
    if (j.end) {
      out << *j.end;
    } else {
      out << '-';
    }
    out << '\t';
    if (j.start) {
      out << (*j.start - j.submit);
    } else {
      out << '-';
    }
    out << '\n';
  }
  return out.str();
}

inline std::string render_scaling(const SimulationReport& rep) {
  std::ostringstream out;
  out << "time_ms\tdemand\tlive\n";
  for (const ScalePoint& p : rep.scaling) {
    out << p.time << '\t' << p.demand << '\t' << p.live << '\n';
  }
  return out.str();
}

}  // namespace vcluster::sim
