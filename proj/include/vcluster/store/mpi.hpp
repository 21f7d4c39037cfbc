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

#include <cctype>
#include <compare>
#include <cstdlib>
#include <string>
#include <string_view>

#include "vcluster/core/error.hpp"

namespace vcluster::store {

enum class MpiImpl { OpenMPI, MPICH, Other };

struct MpiVersion {
  int major = 0;
  int minor = 0;
  int patch = 0;
  auto operator<=>(const MpiVersion&) const = default;

  std::string str() const {
    return std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
  }
};

/// An MPI runtime, e.g. the host-side launcher or the copy inside a
/// container image. Text form is "<implementation>:<major>.<minor>.<patch>".
struct MpiRuntime {
  MpiImpl impl = MpiImpl::OpenMPI;
  std::string other_name;  // set only when impl == Other
  MpiVersion version;

  bool operator==(const MpiRuntime&) const = default;

  std::string impl_name() const {
    switch (impl) {
      case MpiImpl::OpenMPI: return "openmpi";
      case MpiImpl::MPICH: return "mpich";
      case MpiImpl::Other: return other_name;
    }
    return other_name;
  }

  std::string str() const { return impl_name() + ":" + version.str(); }

  static MpiRuntime parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 >= text.size()) {
      throw Error("mpi runtime must look like 'openmpi:4.0.1', got '" + std::string(text) + "'");
    }
    MpiRuntime rt;
    std::string name(text.substr(0, colon));
    for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (name == "openmpi") {
      rt.impl = MpiImpl::OpenMPI;
    } else if (name == "mpich") {
      rt.impl = MpiImpl::MPICH;
    } else {
      rt.impl = MpiImpl::Other;
      rt.other_name = name;
    }

    std::string_view ver = text.substr(colon + 1);
    int parts[3] = {0, 0, 0};
    int idx = 0;
    std::size_t pos = 0;
    while (pos < ver.size() && idx < 3) {
      std::size_t end = pos;
      while (end < ver.size() && std::isdigit(static_cast<unsigned char>(ver[end]))) ++end;
      if (end == pos) throw Error("invalid mpi version '" + std::string(ver) + "'");
      parts[idx++] = std::atoi(std::string(ver.substr(pos, end - pos)).c_str());
      pos = end;
      if (pos < ver.size()) {
        if (ver[pos] != '.') throw Error("invalid mpi version '" + std::string(ver) + "'");
        ++pos;
      }
    }
    if (idx == 0 || pos < ver.size()) {
      throw Error("invalid mpi version '" + std::string(ver) + "'");
    }
    rt.version = {parts[0], parts[1], parts[2]};
    return rt;
  }
};

inline bool same_impl(const MpiRuntime& a, const MpiRuntime& b) {
  if (a.impl != b.impl) return false;
  if (a.impl == MpiImpl::Other) return a.other_name == b.other_name;
  return true;
}

struct CompatResult {
  bool compatible = false;
  std::string reason;  // empty when compatible
};

/// Host/container MPI compatibility: implementations must match and the
/// major versions may differ by at most `max_major_skew` (default 1).
inline CompatResult check_mpi_compat(const MpiRuntime& host, const MpiRuntime& container,
                                     int max_major_skew = 1) {
  if (!same_impl(host, container)) {
    return {false, "implementation mismatch: " + host.impl_name() + " vs " + container.impl_name()};
  }
  int skew = host.version.major - container.version.major;
  if (skew < 0) skew = -skew;
  if (skew > max_major_skew) {
    return {false, "major version skew " + std::to_string(skew) + " exceeds " +
                       std::to_string(max_major_skew) + " (" + host.str() + " vs " +
                       container.str() + ")"};
  }
  return {true, ""};
}

/// Raised when an operation requires a compatible MPI pair and was handed an
/// incompatible one.
struct IncompatibleMpi : Error {
  explicit IncompatibleMpi(const std::string& reason) : Error("incompatible MPI: " + reason) {}
};

}  // namespace vcluster::store
