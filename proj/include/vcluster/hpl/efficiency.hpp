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

#include "vcluster/core/error.hpp"

namespace vcluster::hpl {

struct NonpositiveRmax : Error {
  using Error::Error;
};

// Reference efficiency band for this class of virtualized commodity
// cluster, endpoints included. Inside it, the deployment performs as
// expected; above it usually means Rpeak was computed wrong.
inline constexpr double kReferenceBandLow = 0.73;
inline constexpr double kReferenceBandHigh = 0.78;

struct EfficiencyReport {
  double rmax_gflops = 0.0;   // measured
  double rpeak_gflops = 0.0;  // theoretical
  double efficiency = 0.0;    // rmax / rpeak
  bool in_reference_band = false;
};

inline double rpeak_gflops(int nodes, double per_node_gflops) {
  if (nodes < 1) throw Error("nodes must be >= 1");
  if (per_node_gflops <= 0.0) throw Error("per-node peak must be > 0");
  return static_cast<double>(nodes) * per_node_gflops;
}

inline EfficiencyReport compute_efficiency(double rmax_gflops, double rpeak) {
  if (rpeak <= 0.0) throw Error("rpeak must be > 0");
  if (rmax_gflops <= 0.0) {
    throw NonpositiveRmax("measured Rmax must be > 0, got " + std::to_string(rmax_gflops));
  }
  EfficiencyReport rep;
  rep.rmax_gflops = rmax_gflops;
  rep.rpeak_gflops = rpeak;
  rep.efficiency = rmax_gflops / rpeak;
  rep.in_reference_band =
      rep.efficiency >= kReferenceBandLow && rep.efficiency <= kReferenceBandHigh;
  return rep;
}

}  // namespace vcluster::hpl
