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

#include <string>

#include "vcluster/core/error.hpp"
#include "vcluster/store/image.hpp"

namespace vcluster::hpl {

/// The hybrid launch: the host's mpirun spawns the ranks and each rank
/// execs into the container, so the host MPI does the wire-up while the
/// container supplies the solver and its userland.
inline std::string build_hybrid_command(int nprocs, const store::ImageRef& image,
                                        const std::string& input_file = "HPL.dat") {
  if (nprocs < 1) throw Error("nprocs must be >= 1");
  if (input_file.empty() || input_file.find('/') != std::string::npos) {
    throw Error("input file must be a bare filename");
  }
  return "mpirun -np " + std::to_string(nprocs) + " singularity exec " + image.name +
         ".sif xhpl ./" + input_file;
}

}  // namespace vcluster::hpl
