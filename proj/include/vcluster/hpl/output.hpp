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

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vcluster/core/error.hpp"

namespace vcluster::hpl {

/// One result row from xhpl stdout.
struct HplResult {
  std::string variant;  // e.g. WR11C2R4
  std::int64_t n = 0;
  int nb = 0;
  int p = 0;
  int q = 0;
  double time_s = 0.0;
  double gflops = 0.0;
};

/// Extracts result rows from raw xhpl output. A result row has exactly
/// seven whitespace-separated tokens and a first token starting with "WR"
/// or "WC" (the variant code); requiring the prefix keeps seven-token prose
/// and banner lines out. Skips rows whose numeric fields do not parse.
inline std::vector<HplResult> parse_hpl_output(const std::string& text) {
  std::vector<HplResult> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.size() != 7) continue;
    if (tok[0].rfind("WR", 0) != 0 && tok[0].rfind("WC", 0) != 0) continue;
    try {
      HplResult r;
      r.variant = tok[0];
      r.n = std::stoll(tok[1]);
      r.nb = std::stoi(tok[2]);
      r.p = std::stoi(tok[3]);
      r.q = std::stoi(tok[4]);
      r.time_s = std::stod(tok[5]);
      r.gflops = std::stod(tok[6]);
      out.push_back(std::move(r));
    } catch (const std::exception&) {
      continue;
    }
  }
  return out;
}

/// The run that counts: highest Gflops across all result rows.
inline std::optional<HplResult> best_result(const std::vector<HplResult>& results) {
  std::optional<HplResult> best;
  for (const HplResult& r : results) {
    if (!best || r.gflops > best->gflops) best = r;
  }
  return best;
}

}  // namespace vcluster::hpl
