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

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "vcluster/core/error.hpp"
#include "vcluster/store/digest.hpp"

namespace vcluster::store {

/// A fetchable input with a pinned content hash.
struct SourceRef {
  std::string uri;
  Digest digest;

  bool operator==(const SourceRef&) const = default;
};

/// A build recipe addressed by the hash of what goes into it. Two
/// derivations hash equal exactly when they would build the same thing:
/// argument order matters (it is a command line), input and source order
/// does not, and config is a keyed map.
struct Derivation {
  std::string name;                           // human label, part of the identity
  std::string builder;                        // program that performs the build
  std::vector<std::string> args;              // builder argv, order significant
  std::vector<Digest> inputs;                 // hashes of derivations this one consumes
  std::vector<SourceRef> sources;             // external inputs, content-pinned
  std::map<std::string, std::string> config;  // free-form build settings

  void validate() const {
    if (name.empty()) throw Error("derivation name must not be empty");
    if (builder.empty()) throw Error("derivation builder must not be empty");
    for (char c : name) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                c == '-' || c == '_' || c == '.';
      if (!ok) throw Error("derivation name contains forbidden character: " + name);
    }
  }
};

/// Length-prefixed field framing: `<decimal-length>:<bytes>;`. Unambiguous
/// for arbitrary byte content, so no escaping is ever needed, and nested
/// structures are framed fields whose bodies are themselves framed.
inline void append_field(std::string& out, std::string_view bytes) {
  out += std::to_string(bytes.size());
  out += ':';
  out += bytes;
  out += ';';
}

/// The canonical byte string that gets hashed. Layout (every field framed):
/// version, name, builder, args list, sorted deduped input hashes, sources
/// sorted by (uri, digest), config entries sorted by key. Canonicalizing
/// here rather than in the callers means semantically equal derivations
/// serialize identically no matter how they were assembled.
inline std::string canonical_serialization(const Derivation& d) {
  d.validate();
  std::string out;
  append_field(out, "vcluster-derivation-v1");
  append_field(out, d.name);
  append_field(out, d.builder);

  std::string args;
  for (const std::string& a : d.args) append_field(args, a);
  append_field(out, args);

  std::vector<std::string> input_hex;
  input_hex.reserve(d.inputs.size());
  for (const Digest& in : d.inputs) input_hex.push_back(in.hex());
  std::sort(input_hex.begin(), input_hex.end());
  input_hex.erase(std::unique(input_hex.begin(), input_hex.end()), input_hex.end());
  std::string inputs;
  for (const std::string& h : input_hex) append_field(inputs, h);
  append_field(out, inputs);

  std::vector<SourceRef> sorted_sources = d.sources;
  std::sort(sorted_sources.begin(), sorted_sources.end(),
            [](const SourceRef& a, const SourceRef& b) {
              return a.uri != b.uri ? a.uri < b.uri : a.digest < b.digest;
            });
  std::string sources;
  for (const SourceRef& s : sorted_sources) {
    std::string one;
    append_field(one, s.uri);
    append_field(one, s.digest.hex());
    append_field(sources, one);
  }
  append_field(out, sources);

  std::string config;
  for (const auto& [k, v] : d.config) {
    std::string one;
    append_field(one, k);
    append_field(one, v);
    append_field(config, one);
  }
  append_field(out, config);
  return out;
}

inline Digest hash_derivation(const Derivation& d) {
  return sha256_digest(canonical_serialization(d));
}

}  // namespace vcluster::store
