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

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "vcluster/core/error.hpp"
#include "vcluster/store/digest.hpp"

namespace vcluster::store {

/// A container image reference. A mutable tag ("latest") resolves to
/// different content over time; a pinned reference carries the content
/// digest and always names the same bytes.
///
/// Text form: registry/name:tag[@<64 hex>]. The reference is pinned iff the
/// digest suffix is present.
struct ImageRef {
  std::string registry;
  std::string name;
  std::string tag;
  std::optional<Digest> digest;
  bool pinned = false;

  bool operator==(const ImageRef&) const = default;

  void validate() const {
    if (registry.empty() || name.empty() || tag.empty()) {
      throw Error("image reference needs registry, name and tag");
    }
    if (pinned && !digest.has_value()) {
      throw Error("pinned image reference must carry a digest");
    }
  }

  std::string str() const {
    std::string out = registry + "/" + name + ":" + tag;
    if (digest) out += "@" + digest->hex();
    return out;
  }

  static ImageRef parse(std::string_view text) {
    ImageRef ref;
    auto at = text.find('@');
    if (at != std::string_view::npos) {
      ref.digest = Digest::from_hex(text.substr(at + 1));
      ref.pinned = true;
      text = text.substr(0, at);
    }
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      throw Error("image reference must look like registry/name:tag, got '" + std::string(text) + "'");
    }
    ref.registry = std::string(text.substr(0, slash));
    auto rest = text.substr(slash + 1);
    auto colon = rest.rfind(':');
    if (colon == std::string_view::npos) {
      throw Error("image reference is missing a tag: '" + std::string(text) + "'");
    }
    ref.name = std::string(rest.substr(0, colon));
    ref.tag = std::string(rest.substr(colon + 1));
    ref.validate();
    return ref;
  }
};

struct UnknownImage : Error {
  UnknownImage(const std::string& name, const std::string& tag)
      : Error("unknown image " + name + ":" + tag) {}
};

using RegistryLookup =
    std::function<std::optional<Digest>(const std::string& name, const std::string& tag)>;

/// Resolves a mutable tag to its current digest and returns the pinned
/// reference. Pinning an already-pinned reference is the identity.
inline ImageRef pin_image(const ImageRef& ref, const RegistryLookup& lookup) {
  if (ref.pinned) return ref;
  auto digest = lookup(ref.name, ref.tag);
  if (!digest) throw UnknownImage(ref.name, ref.tag);
  ImageRef pinned = ref;
  pinned.digest = *digest;
  pinned.pinned = true;
  return pinned;
}

}  // namespace vcluster::store
