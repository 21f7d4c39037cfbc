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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vcluster/core/error.hpp"
#include "vcluster/core/time.hpp"
#include "vcluster/store/derivation.hpp"
#include "vcluster/store/digest.hpp"

namespace vcluster::store {

struct MissingInput : Error {
  using Error::Error;
};

struct NameCollision : Error {
  using Error::Error;
};

/// A realized derivation: its identity hash and the immutable path the
/// build landed at.
struct StoreEntry {
  Digest hash;
  std::string store_path;
  TimeMs realized_at = 0;
  Derivation drv;
};

inline std::string store_path_for(const Digest& hash, const std::string& name) {
  return "/vstore/" + hash.hex().substr(0, 16) + "-" + name;
}

/// Content-addressed build store. realize() is memoized on the derivation
/// hash: building the same recipe twice returns the first entry untouched,
/// which is what makes environments reproducible rather than merely
/// rebuildable.
class Store {
 public:
  /// All inputs must have been realized first; the build graph is walked
  /// leaves-up. Throws MissingInput naming the first absent input hash.
  const StoreEntry& realize(const Derivation& d, TimeMs now) {
    d.validate();
    Digest h = hash_derivation(d);
    auto it = entries_.find(h);
    if (it != entries_.end()) return it->second;
    for (const Digest& in : d.inputs) {
      if (!entries_.count(in)) {
        throw MissingInput("derivation " + d.name + " needs unrealized input " + in.hex());
      }
    }
    StoreEntry entry;
    entry.hash = h;
    entry.store_path = store_path_for(h, d.name);
    entry.realized_at = now;
    entry.drv = d;
    auto [pos, inserted] = entries_.emplace(h, std::move(entry));
    return pos->second;
  }

  bool contains(const Digest& h) const { return entries_.count(h) != 0; }

  const StoreEntry& get(const Digest& h) const {
    auto it = entries_.find(h);
    if (it == entries_.end()) throw MissingInput("no store entry for " + h.hex());
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }

  /// The dependency closure of `roots`: every root plus everything its
  /// derivation transitively consumed, each entry once, ordered by store
  /// path. Two distinct entries sharing a derivation name cannot coexist
  /// in one environment (same tool, different builds), hence NameCollision.
  std::vector<const StoreEntry*> compose_env(const std::vector<Digest>& roots) const {
    std::set<Digest> seen;
    std::vector<const StoreEntry*> closure;
    std::vector<Digest> stack(roots.begin(), roots.end());
    while (!stack.empty()) {
      Digest h = stack.back();
      stack.pop_back();
      if (!seen.insert(h).second) continue;
      const StoreEntry& e = get(h);
      closure.push_back(&e);
      for (const Digest& in : e.drv.inputs) stack.push_back(in);
    }
    std::sort(closure.begin(), closure.end(), [](const StoreEntry* a, const StoreEntry* b) {
      return a->store_path < b->store_path;
    });
    std::map<std::string, const StoreEntry*> by_name;
    for (const StoreEntry* e : closure) {
      auto [it, inserted] = by_name.emplace(e->drv.name, e);
      if (!inserted) {
        throw NameCollision("environment would contain two builds of '" + e->drv.name + "': " +
                            it->second->store_path + " and " + e->store_path);
      }
    }
    return closure;
  }

 private:
  std::map<Digest, StoreEntry> entries_;
};

/// One line per entry, `name<TAB>store_path`, for humans and shell scripts.
inline std::string render_env(const std::vector<const StoreEntry*>& entries) {
  std::string out;
  for (const StoreEntry* e : entries) {
    out += e->drv.name;
    out += '\t';
    out += e->store_path;
    out += '\n';
  }
  return out;
}

}  // namespace vcluster::store
