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

// The reproducibility path end to end: hash a small build graph into the
// store, compose a runtime environment from it, pin the container image,
// check the host/container MPI pair, and emit the benchmark inputs.

#include <iostream>

#include "vcluster/vcluster.hpp"

using namespace vcluster;

int main() {
  store::Store st;

  store::Derivation mpi_drv;
  mpi_drv.name = "openmpi";
  mpi_drv.builder = "nix-build";
  mpi_drv.args = {"-A", "openmpi"};
  mpi_drv.config = {{"version", "4.0.1"}, {"fabrics", "tcp"}};
  mpi_drv.sources = {{"https://download.example.org/openmpi-4.0.1.tar.bz2",
                      store::sha256_digest("openmpi-4.0.1-source")}};
  const store::StoreEntry& mpi_entry = st.realize(mpi_drv, 0);

  store::Derivation hpl_drv;
  hpl_drv.name = "hpl";
  hpl_drv.builder = "nix-build";
  hpl_drv.args = {"-A", "hpl"};
  hpl_drv.inputs = {mpi_entry.hash};
  hpl_drv.config = {{"version", "2.3"}, {"blas", "openblas"}};
  const store::StoreEntry& hpl_entry = st.realize(hpl_drv, 1);

  std::cout << "store entries:\n" << store::render_env(st.compose_env({hpl_entry.hash}));

  store::ImageRef image = store::ImageRef::parse("hub/nix-ompi:latest");
  store::ImageRef pinned = store::pin_image(image, [&](const std::string&, const std::string&) {
    return store::sha256_digest("nix-ompi-image-content");
  });
  std::cout << "\npinned image: " << pinned.str() << "\n";

  auto host = store::MpiRuntime::parse("openmpi:3.1.0");
  auto container = store::MpiRuntime::parse("openmpi:4.0.1");
  auto compat = store::check_mpi_compat(host, container);
  std::cout << "mpi " << host.str() << " / " << container.str() << ": "
            << (compat.compatible ? "compatible" : compat.reason) << "\n";

  hpl::HplInput input = hpl::generate_hpl_input(4, 6, 64'000'000'000, 0.8, 192);
  std::cout << "\nHPL N=" << input.n << " NB=" << input.nb << " grid " << input.p << "x"
            << input.q << "\n";
  std::cout << hpl::build_hybrid_command(input.p * input.q, pinned) << "\n";
  return 0;
}
