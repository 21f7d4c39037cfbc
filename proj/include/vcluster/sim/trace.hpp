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

#include <sstream>
#include <string>
#include <vector>

#include "vcluster/core/error.hpp"
#include "vcluster/core/time.hpp"
#include "vcluster/store/image.hpp"
#include "vcluster/store/mpi.hpp"

namespace vcluster::sim {

/// One workload line: when the job arrives, its shape, how long it would
/// really run, its walltime limit, the container image it launches, and the
/// MPI runtime inside that image (checked against the host's at ingestion).
struct TraceEntry {
  TimeMs submit_ms = 0;
  int node_count = 1;
  int tasks_per_node = 1;
  DurationMs duration_ms = 0;
  DurationMs walltime_ms = 0;
  store::ImageRef image;
  store::MpiRuntime mpi;

  void validate() const {
    if (submit_ms < 0) throw Error("trace: submit_ms must be >= 0");
    if (node_count < 1) throw Error("trace: node_count must be >= 1");
    if (tasks_per_node < 1) throw Error("trace: tasks_per_node must be >= 1");
    if (duration_ms <= 0) throw Error("trace: duration_ms must be > 0");
    if (walltime_ms <= 0) throw Error("trace: walltime_ms must be > 0");
    image.validate();
  }
};

struct WorkloadTrace {
  std::vector<TraceEntry> entries;
};

/// Whitespace-separated, one job per line, `#` comments:
///
///   # submit_ms nodes tasks duration_ms walltime_ms image mpi
///   0 4 6 600000 900000 hub/nix-ompi:latest openmpi:4.0.1
inline WorkloadTrace parse_trace(const std::string& text) {
  WorkloadTrace out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 7) {
      throw ParseError(line_no, "expected 7 fields: submit_ms node_count tasks_per_node "
                                "duration_ms walltime_ms image mpi");
    }
    try {
      TraceEntry e;
      e.submit_ms = std::stoll(tok[0]);
      e.node_count = std::stoi(tok[1]);
      e.tasks_per_node = std::stoi(tok[2]);
      e.duration_ms = std::stoll(tok[3]);
      e.walltime_ms = std::stoll(tok[4]);
      e.image = store::ImageRef::parse(tok[5]);
      e.mpi = store::MpiRuntime::parse(tok[6]);
      e.validate();
      out.entries.push_back(std::move(e));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ParseError(line_no, ex.what());
    }
  }
  return out;
}

inline std::string render_trace(const WorkloadTrace& trace) {
  std::ostringstream out;
  out << "# submit_ms node_count tasks_per_node duration_ms walltime_ms image mpi\n";
  for (const TraceEntry& e : trace.entries) {
    out << e.submit_ms << ' ' << e.node_count << ' ' << e.tasks_per_node << ' ' << e.duration_ms
        << ' ' << e.walltime_ms << ' ' << e.image.str() << ' ' << e.mpi.str() << '\n';
  }
  return out.str();
}

}  // namespace vcluster::sim
