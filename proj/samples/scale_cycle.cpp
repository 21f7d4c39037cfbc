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

// A full elasticity cycle in one run: the cluster starts empty, a burst of
// jobs pulls workers into existence, the queue drains, and the idle timeout
// returns the pool to zero.

#include <iostream>

#include "vcluster/vcluster.hpp"

using namespace vcluster;

int main() {
  sim::SimulationInputs in;
  in.cluster.max_nodes = 8;
  in.cluster.min_nodes = 0;
  in.cluster.idle_timeout = 300'000;
  in.cluster.reconcile_interval = 10'000;
  in.cluster.node_flavor = "m1.quad";
  in.cluster.node_image = "centos7-hpc";
  in.cluster.cores_per_node = 4;
  in.cluster.mem_per_node_bytes = 16'000'000'000;
  in.cluster.rpeak_per_node_gflops = 40.0;
  in.cluster.host_mpi = store::MpiRuntime::parse("openmpi:3.1.0");

  in.provider.seed = 7;
  in.provider.latency_min = 30'000;
  in.provider.latency_max = 40'000;

  in.trace = sim::parse_trace(
      "0      4 4 600000 900000 hub/nix-ompi:latest openmpi:4.0.1\n"
      "5000   2 4 300000 600000 hub/nix-ompi:latest openmpi:4.0.1\n"
      "5000   2 4 300000 600000 hub/nix-ompi:latest openmpi:4.0.1\n"
      "900000 1 4 60000  120000 hub/nix-ompi:latest openmpi:4.0.1\n");

  sim::SimulationReport rep = sim::run_simulation(std::move(in));

  std::cout << sim::render_report(rep) << "\n";
  std::cout << sim::render_jobs(rep) << "\n";
  std::cout << sim::render_scaling(rep);
  return rep.leak_check_ok ? 0 : 1;
}
