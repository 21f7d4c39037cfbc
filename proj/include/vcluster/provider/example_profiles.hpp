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

#include "vcluster/provider/provider.hpp"

namespace vcluster::provider {

// Two built-in profiles modeled on real academic clouds. They cover the
// same logical names and differ in exactly the three places that moving a
// cluster between those clouds actually touched: concrete image names,
// concrete flavor names, and whether the tenant must run DHCP itself.

/// A cloud whose catalog already uses the m1.* convention and whose
/// networks hand out addresses on their own. Flavor mapping is identity.
inline CloudProfile jetstream_like_profile() {
  CloudProfile p;
  p.provider_name = "jetstream-like";
  p.flavor_map = {
      {"m1.tiny", "m1.tiny"},
      {"m1.small", "m1.small"},
      {"m1.quad", "m1.quad"},
      {"m1.xlarge", "m1.xlarge"},
  };
  p.image_map = {{"centos7-hpc", "Featured-CentOS7-HPC-Latest"}};
  p.network = NetworkSpec{"cluster-net", false, {}};
  p.validate();
  return p;
}

/// A cloud with a cores/memory flavor convention, a plain base image, and
/// private networks that need tenant-side DHCP servers declared.
inline CloudProfile redcloud_like_profile() {
  CloudProfile p;
  p.provider_name = "redcloud-like";
  p.flavor_map = {
      {"m1.tiny", "c1.m8"},
      {"m1.small", "c2.m16"},
      {"m1.quad", "c4.m32"},
      {"m1.xlarge", "c8.m64"},
  };
  p.image_map = {{"centos7-hpc", "centos-7"}};
  p.network = NetworkSpec{"cluster-net", true, {"192.168.1.2", "192.168.1.3"}};
  p.validate();
  return p;
}

}  // namespace vcluster::provider
