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

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vcluster/core/error.hpp"

namespace vcluster::hpl {

struct Infeasible : Error {
  using Error::Error;
};

inline std::int64_t isqrt64(std::int64_t x) {
  if (x < 0) throw Error("isqrt of negative value");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

/// Largest problem size whose matrix fits in `fraction` of the cluster's
/// combined memory: N = floor(sqrt(fraction * nodes * mem_bytes / 8)),
/// rounded down to a multiple of the block size. The 8 is sizeof(double);
/// HPL factorizes one dense NxN matrix spread across all ranks.
inline std::int64_t problem_size(int nodes, std::int64_t mem_per_node_bytes, double fraction,
                                 int nb) {
  if (nodes < 1) throw Error("nodes must be >= 1");
  if (mem_per_node_bytes < 1) throw Error("mem_per_node_bytes must be >= 1");
  if (fraction <= 0.0 || fraction > 1.0) throw Error("fraction must be in (0, 1]");
  if (nb < 1) throw Error("nb must be >= 1");
  double doubles = fraction * static_cast<double>(nodes) *
                   static_cast<double>(mem_per_node_bytes) / 8.0;
  std::int64_t n = isqrt64(static_cast<std::int64_t>(std::floor(doubles)));
  n -= n % nb;
  if (n < nb) {
    throw Infeasible("memory budget too small for even one " + std::to_string(nb) +
                     "x" + std::to_string(nb) + " block");
  }
  return n;
}

/// Most-square process grid: the factor pair P*Q = nprocs with P <= Q and
/// Q-P minimal. Scanning p downward from sqrt(nprocs) finds it first.
inline std::pair<int, int> process_grid(int nprocs) {
  if (nprocs < 1) throw Error("nprocs must be >= 1");
  for (int p = static_cast<int>(isqrt64(nprocs)); p >= 1; --p) {
    if (nprocs % p == 0) return {p, nprocs / p};
  }
  return {1, nprocs};  // unreachable, p=1 always divides
}

struct HplInput {
  std::int64_t n = 0;
  int nb = 0;
  int p = 0;
  int q = 0;

  bool operator==(const HplInput&) const = default;
};

inline HplInput generate_hpl_input(int nodes, int tasks_per_node,
                                   std::int64_t mem_per_node_bytes, double fraction, int nb) {
  if (tasks_per_node < 1) throw Error("tasks_per_node must be >= 1");
  HplInput in;
  in.n = problem_size(nodes, mem_per_node_bytes, fraction, nb);
  in.nb = nb;
  auto [p, q] = process_grid(nodes * tasks_per_node);
  in.p = p;
  in.q = q;
  return in;
}

namespace detail {
inline void dat_line(std::ostringstream& out, const std::string& value, const char* label) {
  out << value;
  for (std::size_t i = value.size(); i < 13; ++i) out << ' ';
  out << label << '\n';
}
}  // namespace detail

/// The standard 31-line HPL.dat. Everything except N, NB, P, Q is a stock
/// tuning default; line numbers are part of the format, the parser reads
/// values back by position.
inline std::string render_hpl_dat(const HplInput& in) {
  using detail::dat_line;
  std::ostringstream out;
  out << "HPLinpack benchmark input file\n";
  out << "Innovative Computing Laboratory, University of Tennessee\n";
  dat_line(out, "HPL.out", "output file name (if any)");
  dat_line(out, "6", "device out (6=stdout,7=stderr,file)");
  dat_line(out, "1", "# of problems sizes (N)");
  dat_line(out, std::to_string(in.n), "Ns");
  dat_line(out, "1", "# of NBs");
  dat_line(out, std::to_string(in.nb), "NBs");
  dat_line(out, "0", "PMAP process mapping (0=Row-,1=Column-major)");
  dat_line(out, "1", "# of process grids (P x Q)");
  dat_line(out, std::to_string(in.p), "Ps");
  dat_line(out, std::to_string(in.q), "Qs");
  dat_line(out, "16.0", "threshold");
  dat_line(out, "1", "# of panel fact");
  dat_line(out, "2", "PFACTs (0=left, 1=Crout, 2=Right)");
  dat_line(out, "1", "# of recursive stopping criterium");
  dat_line(out, "4", "NBMINs (>= 1)");
  dat_line(out, "1", "# of panels in recursion");
  dat_line(out, "2", "NDIVs");
  dat_line(out, "1", "# of recursive panel fact.");
  dat_line(out, "1", "RFACTs (0=left, 1=Crout, 2=Right)");
  dat_line(out, "1", "# of broadcast");
  dat_line(out, "1", "BCASTs (0=1rg,1=1rM,2=2rg,3=2rM,4=Lng,5=LnM)");
  dat_line(out, "1", "# of lookahead depth");
  dat_line(out, "1", "DEPTHs (>=0)");
  dat_line(out, "2", "SWAP (0=bin-exch,1=long,2=mix)");
  dat_line(out, "64", "swapping threshold");
  dat_line(out, "0", "L1 in (0=transposed,1=no-transposed) form");
  dat_line(out, "0", "U  in (0=transposed,1=no-transposed) form");
  dat_line(out, "1", "Equilibration (0=no,1=yes)");
  dat_line(out, "8", "memory alignment in double (> 0)");
  return out.str();
}

/// Reads N, NB, P, Q back from an HPL.dat by line position (6, 8, 11, 12,
/// 1-based), the same way xhpl itself does.
inline HplInput parse_hpl_dat(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  if (lines.size() < 12) throw ParseError(static_cast<int>(lines.size()), "HPL.dat truncated");

  auto first_int = [&](int line_no) -> std::int64_t {
    std::istringstream ls(lines[static_cast<std::size_t>(line_no - 1)]);
    std::int64_t v = 0;
    if (!(ls >> v)) throw ParseError(line_no, "expected an integer value");
    return v;
  };
  HplInput out;
  out.n = first_int(6);
  out.nb = static_cast<int>(first_int(8));
  out.p = static_cast<int>(first_int(11));
  out.q = static_cast<int>(first_int(12));
  if (out.n < 1 || out.nb < 1 || out.p < 1 || out.q < 1) {
    throw ParseError(6, "HPL.dat dimensions must be positive");
  }
  return out;
}

}  // namespace vcluster::hpl
